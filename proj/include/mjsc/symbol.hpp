#ifndef MJSC_SYMBOL_HPP
#define MJSC_SYMBOL_HPP

#include "mjsc/core.hpp"
#include "mjsc/series.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mjsc {

/// One x-Fourier mode of a symbol: a(x, xi) = sum_k coeff_k(xi) e^{i<k,x>}.
struct XMode {
  std::array<int, 2> k{0, 0};
  std::function<std::complex<double>(std::span<const double> xi)> coeff;
};

/// A real Hamiltonian symbol on T*M, d in {1, 2}.
///
/// grad returns (d_x1..d_xd, d_xi1..d_xid). If no analytic gradient was
/// supplied it falls back to centered differences with step 1e-6.
struct SymbolField {
  int dim = 2;
  std::string name;
  std::function<double(const PhasePoint&)> value;
  std::function<State(const PhasePoint&)> analytic_grad;
  std::optional<FourierTaylorSeries> fourier_rep;
  bool time_reversal = false;
  unsigned angle_mask = 0b11;
  /// Sampling box for chart coordinates (angles use [0, 2pi)).
  std::array<double, 2> x_lo{0.0, 0.0};
  std::array<double, 2> x_hi{kTwoPi, kTwoPi};
  /// Exact x-Fourier decomposition, used by the Weyl quantizer when present.
  std::vector<XMode> x_modes;

  double eval(const PhasePoint& p) const { return value(p); }
  double eval(const State& s) const { return value(PhasePoint::from_state(s, angle_mask)); }
  State grad(const PhasePoint& p) const;
  State grad(const State& s) const { return grad(PhasePoint::from_state(s, angle_mask)); }
  State grad_fd(const PhasePoint& p, double step = 1e-6) const;
  /// Hamilton vector field (dx/dt, dxi/dt) = (d_xi H, -d_x H).
  State hamilton_field(const State& s) const;

  PhasePoint point(std::array<double, 2> x, std::array<double, 2> xi) const {
    return PhasePoint(dim, x, xi, angle_mask);
  }

  /// The symbol of a series in (phi, iota) = (x, xi); gradient is analytic.
  static SymbolField from_series(const FourierTaylorSeries& s, std::string name = "series");
};

/// {f, g}(p) = sum_j (d_xi_j f d_x_j g - d_x_j f d_xi_j g).
double poisson_bracket(const SymbolField& f, const SymbolField& g, const PhasePoint& p);

/// 16 x 16 position grid times 5 momentum radii (d = 2), or 16 x 5 (d = 1),
/// with momentum directions spread by the golden angle.
std::vector<PhasePoint> probe_grid(const SymbolField& s);

/// Largest |eval - fourier_rep.eval| on the probe grid (0 without a series).
double fourier_consistency_defect(const SymbolField& s);
/// Largest |eval(x, xi) - eval(x, -xi)| on the probe grid.
double time_reversal_defect(const SymbolField& s);
/// Throws InvalidArgument if a declared invariant fails on the probe grid.
void validate_symbol(const SymbolField& s);

SymbolField sum(const SymbolField& a, const SymbolField& b, std::string name = "sum");
SymbolField scaled(const SymbolField& a, double c);

}  // namespace mjsc

#endif
