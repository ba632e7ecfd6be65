#include "mjsc/spectra.hpp"

#include <Eigen/Eigenvalues>

namespace mjsc {

namespace {

double psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double eta) {
  const double a = psi(1.0 + eta), b = psi(1.0 - eta);
  return a / (a + b);
}

double smooth_cutoff(double r, double r_in, double r_out) {
  if (!(r_out > r_in)) throw Error(Errc::InvalidArgument, "cutoff needs r_out > r_in");
  return smooth_step((r_in + r_out - 2.0 * r) / (r_out - r_in));
}

double sup_smooth_step_derivative() {
  static const double value = [] {
    const int n = 20000;
    const double step = 2.0 / n;
    double best = 0.0;
    for (int i = 1; i < n; ++i) {
      const double e = -1.0 + i * step;
      best = std::max(best, (smooth_step(e + 1e-6) - smooth_step(e - 1e-6)) / 2e-6);
    }
    return best;
  }();
  return value;
}

QuasiProjector QuasiProjector::build(const ModeLattice& lat, double h, double I1, double delta) {
  if (!(h > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(Errc::InvalidArgument, "quasi-projector needs h > 0 and 0 < delta < 1");
  QuasiProjector Q;
  Q.h = h;
  Q.delta = delta;
  Q.I1 = I1;
  Q.lattice = lat;
  Q.diag.resize(lat.size());
  const double hd = std::pow(h, delta);
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const auto n = lat.mode(i);
    const double r = h * std::hypot(double(n[0]), double(n[1]));
    Q.diag[i] = smooth_cutoff(r) * smooth_step((h * n[0] - I1) / hd);
  }
  return Q;
}

std::vector<Eigen::Index> QuasiProjector::transition_modes() const {
  std::vector<Eigen::Index> out;
  for (Eigen::Index i = 0; i < diag.size(); ++i)
    if (diag[i] > 1e-15 && diag[i] < 1.0 - 1e-15) out.push_back(i);
  return out;
}

double band_commutator_bound(double lambda, double h, double delta) {
  return 2.0 * std::abs(lambda) * sup_smooth_step_derivative() * std::pow(h, 1.0 - delta);
}

template <class Scalar>
double commutator_norm(const QuasiProjector& Q, const WeylMatrix<Scalar>& W, const SpectralWindow<Scalar>& win) {
  if (Q.diag.size() != W.size() || win.eigenvectors.rows() != W.size())
    throw Error(Errc::InvalidArgument, "quasi-projector, matrix and window use different lattices");
  if (win.J_size() == 0) return 0.0;
  const Eigen::SparseMatrix<Scalar> S = W.sparse();
  const DenseMatrix<Scalar>& U = win.eigenvectors;
  const auto q = Q.diag.cast<Scalar>().asDiagonal();
  const DenseMatrix<Scalar> C = q * (S * U) - S * (q * U);
  const DenseMatrix<Scalar> G = C.adjoint() * C;
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

template <class Scalar>
void gram_schmidt_pairs(const SpectralWindow<Scalar>& win, const WeylMatrix<Scalar>& W, const QuasiProjector& Q,
                        PairingReport& report, const GramSchmidtOptions& opt) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::SparseMatrix<Scalar> S = W.sparse();
  report.gram_schmidt.clear();
  report.skipped_mass_floor = 0;
  report.skipped_degenerate = 0;
  for (Eigen::Index j = 0; j < win.J_size(); ++j) {
    const Vec u = win.eigenvectors.col(j);
    const double lam = win.eigenvalues[j];
    const Vec v = Q.apply(u);
    const Vec w = u - v;
    GsRecord rec;
    rec.j = int(j);
    rec.norm_v = v.norm();
    rec.norm_w = w.norm();
    if (rec.norm_v < opt.mass_floor || rec.norm_w < opt.mass_floor) {
      ++report.skipped_mass_floor;
      continue;
    }
    const Vec vp = v / rec.norm_v;
    const Scalar ov = vp.dot(w);
    const Vec wt = w - ov * vp;
    const double den = wt.norm();
    if (den < opt.denominator_floor) {
      ++report.skipped_degenerate;
      continue;
    }
    const Vec wp = wt / den;
    rec.overlap = std::abs(ov);
    rec.residual_v = (S * vp - lam * vp).norm();
    rec.residual_w = (S * wp - lam * wp).norm();
    report.gram_schmidt.push_back(rec);
  }
}

template double commutator_norm(const QuasiProjector&, const WeylMatrix<double>&, const SpectralWindow<double>&);
template double commutator_norm(const QuasiProjector&, const WeylMatrix<std::complex<double>>&,
                                const SpectralWindow<std::complex<double>>&);
template void gram_schmidt_pairs(const SpectralWindow<double>&, const WeylMatrix<double>&, const QuasiProjector&,
                                 PairingReport&, const GramSchmidtOptions&);
template void gram_schmidt_pairs(const SpectralWindow<std::complex<double>>&,
                                 const WeylMatrix<std::complex<double>>&, const QuasiProjector&, PairingReport&,
                                 const GramSchmidtOptions&);

}  // namespace mjsc
