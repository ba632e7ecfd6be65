#ifndef MJSC_BNF_HPP
#define MJSC_BNF_HPP

#include "mjsc/series.hpp"
#include "mjsc/symbol.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mjsc {

/// g with <omega, d_phi g> = rhs, i.e. g_k = rhs_k / (i <k, omega>).
/// Throws SmallDivisor if some |<k, omega>| < dio_guard.
FourierTaylorSeries homological_solve(const FourierTaylorSeries& rhs, std::span<const double> omega,
                                      double dio_guard = 1e-8);

struct BnfOptions {
  double dio_guard = 1e-8;
  /// Leave out the last normalization step (ablation of the remainder order).
  bool skip_last = false;
};

struct BnfResult {
  int N = 0;
  std::vector<double> omega;
  /// Linear coefficients after the degree-1 passes (equal to omega when
  /// the linear part has no angle dependence).
  std::vector<double> omega_eff;
  double E0 = 0.0;
  /// Angle-free part of Taylor degree <= N + 1.
  FourierTaylorSeries normal_form;
  /// Generators in application order: H o Phi_{g_0} o Phi_{g_1} o ... The
  /// leading entries remove angle-dependent linear terms (one pass per entry,
  /// a single zero entry when there are none); one entry per order follows.
  std::vector<FourierTaylorSeries> generators;
  /// Transformed symbol minus normal_form: Taylor degree >= N + 2.
  FourierTaylorSeries remainder_series;
  /// Full transformed symbol (normal_form + remainder_series).
  FourierTaylorSeries transformed;

  double normal_form_value(std::span<const double> iota) const;
};

/// Step m = 1..N removes the angle dependence at Taylor degree m + 1 with a
/// generator of degree m + 1 applied as a Lie series.
BnfResult bnf_normalize(const FourierTaylorSeries& H, std::span<const double> omega, int N,
                        const BnfOptions& opt = {});

/// H o (time-one map of X_g) at (phi, iota), by numerical integration.
State generator_flow(const FourierTaylorSeries& g, const State& y, int steps = 8);

struct ProbeResult {
  std::vector<double> radii;
  std::vector<double> residuals;
  double slope = 0.0;
  bool exact = false;
};

/// sup over a 32^d angle grid and 4 shell directions of
/// |H o kappa(phi, iota) - H_N(iota)| with kappa the composed generator flows.
ProbeResult remainder_order_probe(const BnfResult& result, const FourierTaylorSeries& H,
                                  const std::vector<double>& radii, int flow_steps = 6);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void write_normal_form_csv(std::ostream& os, const BnfResult& r);

/// Averaging over the fast angle x1 near a rational torus:
/// H = H0 + omega1(x2) xi1 + a(x, xi), a = O(|xi|^2).
struct LarmorReduction {
  int N = 0;
  FourierTaylorSeries omega1_series;
  /// x1-independent symbol through Taylor degree N.
  FourierTaylorSeries effective_H;
  /// Lie generators; the generating functions S of the averaging equations
  /// omega1 dS/dx1 + a = b are their negatives at leading order.
  std::vector<FourierTaylorSeries> generators;
  double min_omega1 = 0.0;
  /// min over the x2 grid of |d^2 H'/d xi2^2 (x2, 0, 0)|.
  double min_curvature = 0.0;
  bool nondegenerate = false;

  double omega1(double x2) const;
  double omega1_d(double x2, int order) const;
  /// b_ij(x2): coefficient of xi_i xi_j in the symmetric form sum b_ij xi_i xi_j.
  double b(int i, int j, double x2) const;
  FourierTaylorSeries generating_function(int order) const { return generators.at(order) * -1.0; }
};

LarmorReduction rational_average(const FourierTaylorSeries& H, int N);

/// Effective 1-D symbol at fixed xi1 = k1: either 1/2 xi2^2 + k1 omega1(x2)
/// (quadratic model) or the restriction of effective_H.
struct LarmorOperator {
  SymbolField symbol;
  FourierTaylorSeries series;
  double k1 = 0.0;
  /// "wells at minima of omega1", "inverted regime", or "free".
  std::string regime;
};

LarmorOperator larmor_operator(const LarmorReduction& red, double k1, bool quadratic_model = true);

struct CriticalPoint {
  double x2 = 0.0;
  double omega1 = 0.0;
  double omega1_second = 0.0;
  enum class Kind { Minimum, Maximum, Degenerate } kind = Kind::Degenerate;
};

struct CriticalReport {
  std::vector<CriticalPoint> points;
  /// omega1 constant: every x2 is critical (isochronous case).
  bool degenerate_family = false;
  bool morse = false;
  int minima = 0;
  int maxima = 0;
  /// The critical set {xi1 = xi2 = 0} has codimension 2 in the surface.
  bool sigma1_codim2 = false;
};

CriticalReport critical_set_classify(const LarmorReduction& red, int grid = 2048);

}  // namespace mjsc

#endif
