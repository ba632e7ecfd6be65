#include "mjsc/core.hpp"

namespace mjsc {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EnergyBelowPotential: return "EnergyBelowPotential";
    case Errc::DegenerateMetric: return "DegenerateMetric";
    case Errc::NegativeDepth: return "NegativeDepth";
    case Errc::MjcDefectAboveTolerance: return "MjcDefectAboveTolerance";
    case Errc::FluxOutOfRange: return "FluxOutOfRange";
    case Errc::MultiplierSingular: return "MultiplierSingular";
    case Errc::SurfaceNotFound: return "SurfaceNotFound";
    case Errc::StepRejected: return "StepRejected";
    case Errc::EnergyDriftExceeded: return "EnergyDriftExceeded";
    case Errc::NotOnSurface: return "NotOnSurface";
    case Errc::FieldsNotParallel: return "FieldsNotParallel";
    case Errc::InsufficientWinding: return "InsufficientWinding";
    case Errc::LoopNotClosed: return "LoopNotClosed";
    case Errc::GridTooCoarse: return "GridTooCoarse";
    case Errc::ImplicitSolveFailed: return "ImplicitSolveFailed";
    case Errc::ProfileNotMonotone: return "ProfileNotMonotone";
    case Errc::TruncationOverflow: return "TruncationOverflow";
    case Errc::SmallDivisor: return "SmallDivisor";
    case Errc::FrequencyVanishes: return "FrequencyVanishes";
    case Errc::NondegeneracyFailed: return "NondegeneracyFailed";
    case Errc::EmptyLadder: return "EmptyLadder";
    case Errc::SymbolNotResolvable: return "SymbolNotResolvable";
    case Errc::TruncationInsufficient: return "TruncationInsufficient";
    case Errc::WindowTooSparse: return "WindowTooSparse";
    case Errc::DegenerateDenominator: return "DegenerateDenominator";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

PhasePoint::PhasePoint(int dim, std::array<double, 2> pos, std::array<double, 2> mom,
                       unsigned angles)
    : d(dim), x(pos), xi(mom), angle_mask(angles) {
  if (d != 1 && d != 2) throw Error(Errc::InvalidArgument, "phase point dimension must be 1 or 2");
  for (int j = 0; j < d; ++j)
    if (is_angle(j)) x[j] = wrap_angle(x[j]);
  if (d == 1) {
    x[1] = 0.0;
    xi[1] = 0.0;
  }
}

PhasePoint PhasePoint::from_state(const State& s, unsigned angles) {
  const int dim = static_cast<int>(s.size()) / 2;
  if (dim == 1) return PhasePoint(1, {s[0], 0.0}, {s[1], 0.0}, angles);
  return PhasePoint(2, {s[0], s[1]}, {s[2], s[3]}, angles);
}

State PhasePoint::to_state() const {
  State s(2 * d);
  for (int j = 0; j < d; ++j) {
    s[j] = x[j];
    s[d + j] = xi[j];
  }
  return s;
}

double phase_distance(const PhasePoint& a, const PhasePoint& b) {
  double sum = 0.0;
  for (int j = 0; j < a.d; ++j) {
    const double dx = a.is_angle(j) ? angle_diff(a.x[j], b.x[j]) : a.x[j] - b.x[j];
    const double dp = a.xi[j] - b.xi[j];
    sum += dx * dx + dp * dp;
  }
  return std::sqrt(sum);
}

}  // namespace mjsc
