#include "mjsc/spectra.hpp"

#include "mjsc/roots.hpp"

namespace mjsc {

double liouville_average(const SymbolField& H, const SymbolField& a, double E, int n_x, int n_rays) {
  if (H.dim != a.dim) throw Error(Errc::InvalidArgument, "observable and Hamiltonian dimensions differ");
  if (n_x < 4 || n_rays < 2) throw Error(Errc::InvalidArgument, "Liouville quadrature grid too small");
  const int d = H.dim;
  const int n2 = d == 2 ? n_x : 1;
  const int rays = d == 2 ? n_rays : 2;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n_x; ++i)
    for (int j = 0; j < n2; ++j) {
      const std::array<double, 2> x{H.x_lo[0] + (H.x_hi[0] - H.x_lo[0]) * (i + 0.5) / n_x,
                                    H.x_lo[1] + (H.x_hi[1] - H.x_lo[1]) * (j + 0.5) / n2};
      for (int k = 0; k < rays; ++k) {
        const double th = d == 2 ? kTwoPi * (k + 0.5) / rays : kPi * k;
        const std::array<double, 2> dir{std::cos(th), d == 2 ? std::sin(th) : 0.0};
        auto f = [&](double r) { return H.eval(H.point(x, {r * dir[0], r * dir[1]})) - E; };
        if (!(f(0.0) < 0.0)) continue;
        const auto r = ray_root(f);
        if (!r) continue;
        const PhasePoint p = H.point(x, {*r * dir[0], *r * dir[1]});
        const State g = H.grad(p);
        double dr = 0.0;
        for (int c = 0; c < d; ++c) dr += g[d + c] * dir[c];
        if (std::abs(dr) < 1e-14) throw Error(Errc::NumericalFailure, "energy surface tangent to a momentum ray");
        const double w = std::pow(*r, d - 1) / std::abs(dr);
        num += w * a.eval(p);
        den += w;
      }
    }
  if (!(den > 0.0)) throw Error(Errc::SurfaceNotFound, "energy surface not met by any momentum ray");
  return num / den;
}

template <class Scalar>
ObservableAverage observable_average(const SpectralWindow<Scalar>& win, const SymbolField& a, const SymbolField& H,
                                     const WeylOptions& opt) {
  if (win.J_size() == 0) throw Error(Errc::WindowTooSparse, "empty spectral window");
  // Complex matrix so that observables with odd x-modes work on real windows too.
  const auto A = weyl_matrix<std::complex<double>>(a, win.h, win.lattice.n_max, opt).sparse();
  ObservableAverage out;
  double acc = 0.0;
  for (Eigen::Index j = 0; j < win.J_size(); ++j) {
    const Eigen::VectorXcd u = win.eigenvectors.col(j).template cast<std::complex<double>>();
    acc += u.dot(A * u).real();
  }
  out.window_mean = acc / double(win.J_size());
  out.liouville = liouville_average(H, a, win.E_center);
  out.gap = std::abs(out.window_mean - out.liouville);
  return out;
}

template ObservableAverage observable_average(const SpectralWindow<double>&, const SymbolField&, const SymbolField&,
                                              const WeylOptions&);
template ObservableAverage observable_average(const SpectralWindow<std::complex<double>>&, const SymbolField&,
                                              const SymbolField&, const WeylOptions&);

}  // namespace mjsc
