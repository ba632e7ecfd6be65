#include "mjsc/spectra.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace mjsc {

template <class Scalar>
SpectralWindow<Scalar> solve_window(const WeylMatrix<Scalar>& W, double E, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(Errc::InvalidArgument, "window exponent must lie in (0, 1)");
  SpectralWindow<Scalar> win;
  win.h = W.h;
  win.delta = delta;
  win.E_center = E;
  win.lattice = W.lattice;
  const auto dec = hermitian_eigensolve<Scalar>(W.entries, true);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < dec.values.size(); ++i)
    if (dec.values[i] >= win.lo() && dec.values[i] <= win.hi()) keep.push_back(i);
  win.eigenvalues.resize(Eigen::Index(keep.size()));
  win.eigenvectors.resize(W.size(), Eigen::Index(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    win.eigenvalues[Eigen::Index(j)] = dec.values[keep[j]];
    win.eigenvectors.col(Eigen::Index(j)) = dec.vectors.col(keep[j]);
  }
  std::vector<Eigen::Index> boundary;
  for (Eigen::Index i = 0; i < W.size(); ++i)
    if (W.lattice.on_boundary(i)) boundary.push_back(i);
  for (Eigen::Index j = 0; j < win.J_size(); ++j) {
    double mass = 0.0;
    for (Eigen::Index i : boundary) mass += std::norm(win.eigenvectors(i, j));
    win.truncation_report = std::max(win.truncation_report, mass);
  }
  return win;
}

template <class Scalar>
SpectralWindow<Scalar> solve_window(const SymbolField& sym, double h, double E, double delta,
                                    const WindowRetry& retry, WeylMatrix<Scalar>* used) {
  int n_max = std::min(retry.n_max_start, retry.n_max_cap);
  for (;;) {
    WeylMatrix<Scalar> W = weyl_matrix<Scalar>(sym, h, n_max, retry.weyl);
    SpectralWindow<Scalar> win = solve_window(W, E, delta);
    if (win.truncation_report <= retry.truncation_tol) {
      if (used) *used = std::move(W);
      return win;
    }
    if (n_max >= retry.n_max_cap)
      throw Error(Errc::TruncationInsufficient, "boundary mass " + std::to_string(win.truncation_report) +
                                                    " at n_max = " + std::to_string(n_max));
    n_max = std::min(2 * n_max, retry.n_max_cap);
  }
}

template <class Scalar>
double eigen_residual(const WeylMatrix<Scalar>& W, const SpectralWindow<Scalar>& win) {
  if (win.J_size() == 0) return 0.0;
  const DenseMatrix<Scalar> R =
      W.entries * win.eigenvectors - win.eigenvectors * win.eigenvalues.template cast<Scalar>().asDiagonal();
  return R.colwise().norm().maxCoeff();
}

double paired_fraction(const std::vector<double>& nearest_gap, double threshold) {
  if (nearest_gap.empty()) return 0.0;
  const auto n = std::count_if(nearest_gap.begin(), nearest_gap.end(), [&](double g) { return g <= threshold; });
  return double(n) / double(nearest_gap.size());
}

template <class Scalar>
PairingReport pairing_report(const SpectralWindow<Scalar>& win, const PairingPolicy& policy) {
  const Eigen::Index J = win.J_size();
  if (J < 10) throw Error(Errc::WindowTooSparse, "window holds " + std::to_string(J) + " eigenvalues (< 10)");
  PairingReport r;
  r.h = win.h;
  r.J_size = J;
  for (Eigen::Index j = 0; j + 1 < J; ++j) r.gaps.push_back(win.eigenvalues[j + 1] - win.eigenvalues[j]);
  for (Eigen::Index j = 0; j < J; ++j) {
    double g = std::numeric_limits<double>::infinity();
    if (j > 0) g = std::min(g, r.gaps[std::size_t(j - 1)]);
    if (j + 1 < J) g = std::min(g, r.gaps[std::size_t(j)]);
    r.nearest_gap.push_back(g);
  }
  r.mean_spacing = 2.0 * std::pow(win.h, win.delta) / double(J);
  r.threshold_a = policy.rel_spacing * r.mean_spacing;
  r.threshold_b = std::pow(win.h, policy.power);
  r.paired_fraction_a = paired_fraction(r.nearest_gap, r.threshold_a);
  r.paired_fraction_b = paired_fraction(r.nearest_gap, r.threshold_b);
  return r;
}

void write_window_csv(std::ostream& os, const Eigen::VectorXd& eigenvalues, const HusimiReport* husimi) {
  os << "j,eigenvalue";
  if (husimi)
    for (const auto& name : husimi->regions) os << ",mass_" << name;
  os << '\n';
  char buf[64];
  for (Eigen::Index j = 0; j < eigenvalues.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g", long(j), eigenvalues[j]);
    os << buf;
    if (husimi)
      for (double m : husimi->masses[std::size_t(j)]) {
        std::snprintf(buf, sizeof buf, ",%.17g", m);
        os << buf;
      }
    os << '\n';
  }
}

#define MJSC_INSTANTIATE(S)                                                                                \
  template SpectralWindow<S> solve_window(const WeylMatrix<S>&, double, double);                           \
  template SpectralWindow<S> solve_window(const SymbolField&, double, double, double, const WindowRetry&,   \
                                          WeylMatrix<S>*);                                                 \
  template double eigen_residual(const WeylMatrix<S>&, const SpectralWindow<S>&);                          \
  template PairingReport pairing_report(const SpectralWindow<S>&, const PairingPolicy&);

MJSC_INSTANTIATE(double)
MJSC_INSTANTIATE(std::complex<double>)

#undef MJSC_INSTANTIATE

}  // namespace mjsc
