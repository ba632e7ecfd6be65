#ifndef MJSC_SPECTRA_HPP
#define MJSC_SPECTRA_HPP

#include "mjsc/symbol.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mjsc {

/// Fourier modes n in Z^d with |n|_inf <= n_max, flattened with
/// index = sum_j (n_j + n_max) (2 n_max + 1)^j.
struct ModeLattice {
  int dim = 2;
  int n_max = 0;

  int side() const { return 2 * n_max + 1; }
  Eigen::Index size() const { return dim == 2 ? Eigen::Index(side()) * side() : side(); }
  Eigen::Index index(std::array<int, 2> n) const {
    return dim == 2 ? Eigen::Index(n[0] + n_max) + Eigen::Index(n[1] + n_max) * side() : n[0] + n_max;
  }
  std::array<int, 2> mode(Eigen::Index i) const {
    if (dim == 1) return {int(i) - n_max, 0};
    return {int(i % side()) - n_max, int(i / side()) - n_max};
  }
  bool contains(std::array<int, 2> n) const {
    return std::abs(n[0]) <= n_max && (dim == 1 ? n[1] == 0 : std::abs(n[1]) <= n_max);
  }
  bool on_boundary(Eigen::Index i) const {
    const auto n = mode(i);
    return std::abs(n[0]) == n_max || (dim == 2 && std::abs(n[1]) == n_max);
  }
};

/// Largest dense problem accepted: (2 * 34 + 1)^2 modes.
inline constexpr Eigen::Index kMaxDenseDim = 4761;

template <class Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
struct EigenDecomposition {
  Eigen::VectorXd values;
  DenseMatrix<Scalar> vectors;
};

/// Full Hermitian eigensolve (LAPACK dsyevd / zheevd when available).
template <class Scalar>
EigenDecomposition<Scalar> hermitian_eigensolve(const DenseMatrix<Scalar>& A, bool want_vectors = true);

template <class Scalar>
struct WeylMatrix {
  double h = 0.0;
  ModeLattice lattice;
  DenseMatrix<Scalar> entries;
  std::string symbol_hash;

  Eigen::Index size() const { return entries.rows(); }
  Eigen::SparseMatrix<Scalar> sparse(double tol = 0.0) const { return entries.sparseView(Scalar(1), tol); }
  double hermiticity_defect() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }
};

struct WeylOptions {
  /// Fourier cutoff for symbols without exact x-modes (DFT on a 4 k_max grid).
  int fft_k_max = 0;
  /// Entries below this magnitude are dropped.
  double drop_tol = 0.0;
};

/// entry(m, n) = a_{m-n}(h (m + n) / 2). The real instantiation throws
/// SymbolNotResolvable when an entry has an imaginary part above 1e-13.
template <class Scalar>
WeylMatrix<Scalar> weyl_matrix(const SymbolField& sym, double h, int n_max, const WeylOptions& opt = {});

template <class Scalar>
struct SpectralWindow {
  double h = 0.0;
  double delta = 0.0;
  double E_center = 0.0;
  ModeLattice lattice;
  Eigen::VectorXd eigenvalues;
  DenseMatrix<Scalar> eigenvectors;
  /// Largest coefficient mass of a window eigenvector on |n|_inf = n_max.
  double truncation_report = 0.0;

  Eigen::Index J_size() const { return eigenvalues.size(); }
  double lo() const { return E_center - std::pow(h, delta); }
  double hi() const { return E_center + std::pow(h, delta); }
};

template <class Scalar>
SpectralWindow<Scalar> solve_window(const WeylMatrix<Scalar>& W, double E, double delta);

struct WindowRetry {
  int n_max_start = 16;
  int n_max_cap = 34;
  double truncation_tol = 1e-8;
  WeylOptions weyl;
};

/// Rebuilds with doubled n_max (capped) until truncation_report passes;
/// throws TruncationInsufficient at the cap.
template <class Scalar>
SpectralWindow<Scalar> solve_window(const SymbolField& sym, double h, double E, double delta,
                                    const WindowRetry& retry = {}, WeylMatrix<Scalar>* used = nullptr);

/// max_j ||W u_j - lambda_j u_j||.
template <class Scalar>
double eigen_residual(const WeylMatrix<Scalar>& W, const SpectralWindow<Scalar>& win);

struct GsRecord {
  int j = 0;
  double norm_v = 0.0;
  double norm_w = 0.0;
  double overlap = 0.0;
  double residual_v = 0.0;
  double residual_w = 0.0;
};

struct PairingReport {
  double h = 0.0;
  Eigen::Index J_size = 0;
  std::vector<double> gaps;
  /// Distance of each eigenvalue to its nearest neighbor in the window.
  std::vector<double> nearest_gap;
  double mean_spacing = 0.0;
  double paired_fraction_a = 0.0;
  double paired_fraction_b = 0.0;
  double threshold_a = 0.0;
  double threshold_b = 0.0;
  std::vector<GsRecord> gram_schmidt;
  int skipped_mass_floor = 0;
  int skipped_degenerate = 0;
};

struct PairingPolicy {
  /// (a): gap <= rel_spacing * mean_spacing.
  double rel_spacing = 1e-3;
  /// (b): gap <= h^power.
  double power = 4.0;
};

/// Fraction of eigenvalues whose nearest-neighbor gap is at most threshold.
double paired_fraction(const std::vector<double>& nearest_gap, double threshold);

template <class Scalar>
PairingReport pairing_report(const SpectralWindow<Scalar>& win, const PairingPolicy& policy = {});

/// Regions of momentum space (predicates on xi) used for Husimi masses.
struct RegionPartition {
  std::vector<std::string> names;
  std::vector<std::function<bool(std::span<const double> xi)>> contains;

  std::size_t size() const { return names.size(); }
  /// First region containing xi, or -1.
  int locate(std::span<const double> xi) const;
};

/// n equal angular sectors of the xi-plane, the first starting at theta0.
RegionPartition angular_sectors(int n, double theta0 = 0.0);

/// Sectors bounded by the momentum directions theta1 < theta3 < theta1 + pi
/// of two tori and their time-reversed images: S1 = (theta1, theta3),
/// S3 = (theta3, theta1 + pi), S2 = Gamma(S1), S4 = Gamma(S3).
RegionPartition torus_partition(double theta1, double theta3);

struct HusimiReport {
  std::vector<std::string> regions;
  /// masses[j][r]: mass of window state j in region r.
  std::vector<std::vector<double>> masses;
  std::vector<double> totals;
  /// Region with the largest mass for each state, and that mass.
  std::vector<int> dominant;
  double grid_step = 0.0;
};

struct HusimiGrid {
  double xi_extent = 2.0;
  /// Centers per sqrt(h) cell; must be >= 2.
  double centers_per_cell = 2.0;
};

/// Region masses of periodized Gaussian coherent states of width sqrt(h),
/// integrated over positions in closed form (Parseval).
template <class Scalar>
HusimiReport husimi_masses(const SpectralWindow<Scalar>& win, const RegionPartition& part,
                           const HusimiGrid& grid = {});

/// Husimi density at (x0, xi0) of a coefficient vector on the lattice.
template <class Scalar>
double husimi_density(const ModeLattice& lat, double h, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& u,
                      std::span<const double> x0, std::span<const double> xi0);

/// Normalized Liouville average of a over {H = E}: positions on an n_x^d
/// grid, n_rays momentum rays, weight r^{d-1} / |d_r H|.
double liouville_average(const SymbolField& H, const SymbolField& a, double E, int n_x = 64,
                         int n_rays = 64);

struct ObservableAverage {
  double window_mean = 0.0;
  double liouville = 0.0;
  double gap = 0.0;
};

template <class Scalar>
ObservableAverage observable_average(const SpectralWindow<Scalar>& win, const SymbolField& a,
                                     const SymbolField& H, const WeylOptions& opt = {});

/// Smooth step: 0 below -1, 1 above 1, nondecreasing.
double smooth_step(double eta);
/// Cutoff equal to 1 on [0, r_in] and 0 beyond r_out.
double smooth_cutoff(double r, double r_in = 2.0, double r_out = 3.0);

/// Diagonal multiplier q(h n) = chi(|h n|) Phi((h n_1 - I1) / h^delta).
struct QuasiProjector {
  double h = 0.0;
  double delta = 0.0;
  double I1 = 0.0;
  ModeLattice lattice;
  Eigen::VectorXd diag;

  static QuasiProjector build(const ModeLattice& lat, double h, double I1, double delta);
  template <class Scalar>
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> apply(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v) const {
    return diag.cast<Scalar>().cwiseProduct(v);
  }
  /// Mode indices where Phi is neither 0 nor 1 (or chi is fractional).
  std::vector<Eigen::Index> transition_modes() const;
};

double sup_smooth_step_derivative();

/// ||(Q W - W Q) U||_2 with U the window eigenvectors.
template <class Scalar>
double commutator_norm(const QuasiProjector& Q, const WeylMatrix<Scalar>& W, const SpectralWindow<Scalar>& win);

/// 2 lambda sup|Phi'| h^{1 - delta}: bound for a symbol H(xi) + lambda (e^{i x_1} + e^{-i x_1}).
double band_commutator_bound(double lambda, double h, double delta);

struct GramSchmidtOptions {
  double mass_floor = 0.1;
  double denominator_floor = 1e-12;
};

/// Pairs (v'_j, w'_j) from v = Q u_j, w = (1 - Q) u_j with residuals
/// ||(W - lambda_j) v'_j|| and ||(W - lambda_j) w'_j||.
template <class Scalar>
void gram_schmidt_pairs(const SpectralWindow<Scalar>& win, const WeylMatrix<Scalar>& W,
                        const QuasiProjector& Q, PairingReport& report, const GramSchmidtOptions& opt = {});

/// All eigenvalues of the 1-D Weyl quantization, ascending.
Eigen::VectorXd solve_1d(const SymbolField& p, double h, int n_max, const WeylOptions& opt = {});

void write_window_csv(std::ostream& os, const Eigen::VectorXd& eigenvalues, const HusimiReport* husimi);

}  // namespace mjsc

#endif
