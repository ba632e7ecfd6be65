#ifndef MJSC_CORE_HPP
#define MJSC_CORE_HPP

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mjsc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class Errc {
  InvalidArgument,
  EnergyBelowPotential,
  DegenerateMetric,
  NegativeDepth,
  MjcDefectAboveTolerance,
  FluxOutOfRange,
  MultiplierSingular,
  SurfaceNotFound,
  StepRejected,
  EnergyDriftExceeded,
  NotOnSurface,
  FieldsNotParallel,
  InsufficientWinding,
  LoopNotClosed,
  GridTooCoarse,
  ImplicitSolveFailed,
  ProfileNotMonotone,
  TruncationOverflow,
  SmallDivisor,
  FrequencyVanishes,
  NondegeneracyFailed,
  EmptyLadder,
  SymbolNotResolvable,
  TruncationInsufficient,
  WindowTooSparse,
  DegenerateDenominator,
  ConfigInvalid,
  NumericalFailure,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Phase-space state (x_1..x_d, xi_1..xi_d) for d <= 2, stored without heap allocation.
using State = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

/// Signed difference a - b reduced to (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  return d;
}

/// A point (x, xi) of T*M with d in {1, 2}. Coordinates flagged as angles in
/// `angle_mask` are reduced to [0, 2pi) on construction; chart coordinates
/// (e.g. the latitude of the Katok chart) are stored as given.
struct PhasePoint {
  int d = 2;
  std::array<double, 2> x{0.0, 0.0};
  std::array<double, 2> xi{0.0, 0.0};
  unsigned angle_mask = 0b11;

  PhasePoint() = default;
  PhasePoint(int dim, std::array<double, 2> pos, std::array<double, 2> mom,
             unsigned angles = 0b11);

  static PhasePoint from_state(const State& s, unsigned angles = 0b11);
  State to_state() const;

  bool is_angle(int j) const { return (angle_mask >> j) & 1u; }
};

/// Distance in T*M using the wraparound metric on angle coordinates.
double phase_distance(const PhasePoint& a, const PhasePoint& b);

}  // namespace mjsc

#endif
