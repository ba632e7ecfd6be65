#ifndef MJSC_KAM_HPP
#define MJSC_KAM_HPP

#include "mjsc/core.hpp"

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mjsc {

/// An integrable profile Htilde(I) on a regular 2-D action grid with its
/// frequency map omega = dHtilde/dI.
struct FrequencyMap {
  std::function<double(const Eigen::Vector2d&)> H;
  std::function<Eigen::Vector2d(const Eigen::Vector2d&)> omega_fn;
  std::vector<double> axis1;
  std::vector<double> axis2;
  /// omega at (axis1[i], axis2[j]), stored row-major in i.
  std::vector<Eigen::Vector2d> omega;

  Eigen::Vector2d omega_at(std::size_t i, std::size_t j) const { return omega[i * axis2.size() + j]; }
  Eigen::Vector2d frequency(const Eigen::Vector2d& I) const;

  /// Tabulates omega on the grid; omega_fn may be empty, in which case
  /// centered differences of H (step 1e-6) are used.
  static FrequencyMap build(std::function<double(const Eigen::Vector2d&)> H,
                            std::function<Eigen::Vector2d(const Eigen::Vector2d&)> omega_fn,
                            std::vector<double> axis1, std::vector<double> axis2);
};

std::vector<double> linspace(double a, double b, int n);

/// Determinant of [[domega/dI, omega], [omega^T, 0]] at a grid point,
/// with domega/dI by centered differences of the tabulated omega.
double isoenergetic_det(const FrequencyMap& fm, const Eigen::Vector2d& I);

struct RotationProfile {
  std::vector<double> mu;
  std::vector<double> f;
  std::vector<double> fprime;
  double fsecond_at_0 = 0.0;
  /// max |fprime - spectral derivative of f|; 0 for profiles given directly.
  double derivative_defect = 0.0;
  bool nondegenerate = true;

  /// A profile given directly by its rotation numbers (f is left empty).
  static RotationProfile from_fprime(std::vector<double> mu, std::vector<double> fprime);
};

/// Chebyshev-Lobatto nodes on [-w, w], n odd so that mu = 0 is a node.
std::vector<double> chebyshev_nodes(double half_width, int n);
/// Derivative of the Chebyshev interpolant of values on chebyshev_nodes.
std::vector<double> chebyshev_derivative(const std::vector<double>& values, double half_width);

/// Solves Htilde(c1 + mu, c2 + f(mu)) = calE by Newton on each node and
/// shifts f so that f(0) = 0.
RotationProfile rotation_profile(const FrequencyMap& fm, double calE, const Eigen::Vector2d& center,
                                 double half_width = 0.2, int n = 33);

struct DiophantineParams {
  double dio_c = 0.01;
  double sigma = 2.5;
  int q_max = 200;

  void validate() const;
};

enum class MaskStatus { Ok, ProfileNotMonotone };

struct KamMask {
  DiophantineParams params;
  std::vector<double> mu;
  std::vector<double> fprime;
  std::vector<char> accepted;
  /// Closest resonance p/q in units of its strip half-width c/q^sigma.
  std::vector<long> nearest_p;
  std::vector<int> nearest_q;
  std::vector<double> distance;
  /// Length of the union of pulled-back resonance strips; empty when the
  /// profile is not monotone.
  std::optional<double> complement_measure;
  MaskStatus status = MaskStatus::Ok;

  double span() const { return mu.empty() ? 0.0 : mu.back() - mu.front(); }
  double accepted_fraction() const;
  /// Grid-resolution accepted measure: accepted fraction times span.
  double accepted_measure() const { return accepted_fraction() * span(); }
};

/// Throws ProfileNotMonotone when require_monotone is set and f' is not
/// strictly monotone; otherwise the mask is returned without a measure.
KamMask kam_mask(const RotationProfile& profile, const DiophantineParams& params,
                 bool require_monotone = false);

/// 2 sum_{q <= q_max} q^{1 - sigma}: bound on complement_measure / dio_c
/// per unit length of the f' range.
double resonance_constant(double sigma, int q_max);

double stable_dimension_estimate(const KamMask& mask, double h, double delta);

void write_mask_csv(std::ostream& os, const KamMask& m);

}  // namespace mjsc

#endif
