#ifndef MJSC_MODELS_HPP
#define MJSC_MODELS_HPP

#include "mjsc/symbol.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <vector>

namespace mjsc {

/// Trigonometric polynomial sum_k (a_k cos<k,x> + b_k sin<k,x>) with analytic
/// gradient and x-Fourier modes; the potential type of the bundled models.
struct TrigTerm {
  std::array<int, 2> k{0, 0};
  double a = 0.0;
  double b = 0.0;
};

struct TrigPolynomial {
  int dim = 2;
  std::vector<TrigTerm> terms;

  double operator()(std::span<const double> x) const;
  std::array<double, 2> gradient(std::span<const double> x) const;
  /// Max over a regular n^d grid.
  double grid_max(int n = 64) const;
};

/// Report on the shared energy surface of a pair.
struct MjcReport {
  double max_defect = 0.0;
  double max_multiplier = 0.0;
  double min_multiplier = 0.0;
  int n_points = 0;
  /// (angle index, ray index) pairs on which no surface point was found.
  std::vector<std::pair<int, int>> failed_rays;
};

/// Two symbols sharing the surface {calH = calE} = {H = E}.
struct MjPair {
  SymbolField calH;
  SymbolField H;
  double calE = 1.0;
  double E = 1.0;
  std::string kind;
  std::optional<MjcReport> consistency;
};

/// Inverse metric on momenta; constant metrics skip finite differences.
struct CoMetric {
  std::function<Eigen::Matrix2d(std::span<const double> x)> g;
  bool constant = true;

  static CoMetric identity();
  static CoMetric diagonal(double g11, double g22);
};

MjPair build_mechanical_pair(const CoMetric& metric, const TrigPolynomial& V, double E);

/// Liouville metric |xi|^2 / (a(x1) + b(x2)), paired with |xi|^2 - a - b at E = 0.
MjPair build_liouville_pair(const TrigPolynomial& a_of_x1, const TrigPolynomial& b_of_x2);

struct WaterWaveSymbol {
  std::function<double(std::span<const double> x)> depth_D;
  std::function<double(std::span<const double> x)> surface_tension;

  double eval(std::span<const double> x, double xi_norm) const;
};

/// calH = |xi|^2 g(x) at calE = 1, H = |xi| (1 + mu xi^2) tanh(D |xi|) at E.
/// The defect between the two surfaces is measured and attached; in strict
/// mode a defect above tol throws MjcDefectAboveTolerance.
MjPair build_waterwave_pair(const WaterWaveSymbol& w,
                            const std::function<double(std::span<const double> x)>& liouville_g,
                            double E, bool strict = false, double tol = 1e-8);

/// g(x) = 1 / k(x)^2 with k(x) the root of the dispersion relation at
/// energy E, which makes the Liouville surface match the water-wave one.
std::function<double(std::span<const double> x)> waterwave_matched_g(const WaterWaveSymbol& w, double E);

/// Pair from a Fourier-Taylor series H with calH = H at the same energy.
MjPair build_series_pair(const FourierTaylorSeries& s, double E);

/// omega = (1, golden ratio).
std::array<double, 2> golden_frequencies();

/// <omega, iota> + iota1^2 / 2 + 0.3 iota1 iota2 plus eps times a few
/// low-order Fourier modes at Taylor degrees 1 to 4.
FourierTaylorSeries standard_bnf_series(double eps = 0.05, int k_max = 12, int deg_max = 8);

/// (2 - cos x2) xi1 + xi2^2 / 2 plus eps times x1-dependent terms of
/// degree 2 and 3.
FourierTaylorSeries larmor_series(double eps = 0.02, int k_max = 8, int deg_max = 6);

/// Randers symbol on the sphere in the equatorial chart (q1 longitude,
/// q2 latitude): lambda = sqrt(xi1^2 / cos^2 q2 + xi2^2), eta = alpha xi1.
struct KatokModel {
  double alpha = 0.0;
  double band = kPi / 2 - 0.1;
  SymbolField lambda;
  SymbolField eta;
  SymbolField H;

  /// Momentum xi1 of the unit-energy equator orbit on branch +1 / -1.
  double equator_momentum(int branch) const { return branch > 0 ? 1.0 / (1.0 + alpha) : -1.0 / (1.0 - alpha); }
};

KatokModel katok_hamiltonian(double alpha_flux, double band = kPi / 2 - 0.1);

/// Point on {H = E} found along the momentum ray of angle theta at x.
std::optional<PhasePoint> surface_point(const SymbolField& H, double E, std::array<double, 2> x,
                                        double theta);

double mj_multiplier(const MjPair& pair, const PhasePoint& p);

MjcReport mj_consistency_report(const MjPair& pair, int n_rays, int n_angles);

}  // namespace mjsc

#endif
