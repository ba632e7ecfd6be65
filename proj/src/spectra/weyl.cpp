#include "mjsc/spectra.hpp"

#include <cstdio>

namespace mjsc {

namespace {

using cd = std::complex<double>;

// Coefficient table a_k(xi) for every midpoint sum s = m + n, by DFT over a
// 4 k_max grid in x; stored as table[s_index][k_index].
struct DftTable {
  int k_max = 0;
  int s_max = 0;
  int dim = 2;
  std::vector<std::vector<cd>> coeff;

  int k_side() const { return 2 * k_max + 1; }
  int s_side() const { return 2 * s_max + 1; }
  std::size_t s_index(std::array<int, 2> s) const {
    return dim == 2 ? std::size_t(s[0] + s_max) + std::size_t(s[1] + s_max) * s_side() : std::size_t(s[0] + s_max);
  }
  std::size_t k_index(std::array<int, 2> k) const {
    return dim == 2 ? std::size_t(k[0] + k_max) + std::size_t(k[1] + k_max) * k_side() : std::size_t(k[0] + k_max);
  }
};

DftTable build_dft_table(const SymbolField& sym, double h, int n_max, int k_max) {
  DftTable t;
  t.k_max = k_max;
  t.s_max = 2 * n_max;
  t.dim = sym.dim;
  const int M = 4 * k_max;
  const int d = sym.dim;
  const int M2 = d == 2 ? M : 1;
  const std::size_t ns = d == 2 ? std::size_t(t.s_side()) * t.s_side() : t.s_side();
  const std::size_t nk = d == 2 ? std::size_t(t.k_side()) * t.k_side() : t.k_side();
  t.coeff.assign(ns, std::vector<cd>(nk));
  std::vector<cd> e1(std::size_t(M) * t.k_side());
  for (int i = 0; i < M; ++i)
    for (int k = -k_max; k <= k_max; ++k) e1[std::size_t(i) * t.k_side() + (k + k_max)] = std::polar(1.0, -kTwoPi * i * k / M);

  std::vector<double> samples(std::size_t(M) * M2);
  double peak = 0.0, edge = 0.0;
  for (std::size_t si = 0; si < ns; ++si) {
    const std::array<int, 2> s{int(si % t.s_side()) - t.s_max, d == 2 ? int(si / t.s_side()) - t.s_max : 0};
    const std::array<double, 2> xi{0.5 * h * s[0], 0.5 * h * s[1]};
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M2; ++j)
        samples[std::size_t(i) + std::size_t(j) * M] = sym.eval(sym.point({kTwoPi * i / M, kTwoPi * j / M}, xi));
    auto& row = t.coeff[si];
    for (int k1 = -k_max; k1 <= k_max; ++k1)
      for (int k2 = (d == 2 ? -k_max : 0); k2 <= (d == 2 ? k_max : 0); ++k2) {
        cd acc = 0.0;
        for (int j = 0; j < M2; ++j) {
          cd inner = 0.0;
          for (int i = 0; i < M; ++i)
            inner += samples[std::size_t(i) + std::size_t(j) * M] * e1[std::size_t(i) * t.k_side() + (k1 + k_max)];
          acc += d == 2 ? inner * e1[std::size_t(j) * t.k_side() + (k2 + k_max)] : inner;
        }
        acc /= double(M) * M2;
        row[t.k_index({k1, k2})] = acc;
        peak = std::max(peak, std::abs(acc));
        if (std::abs(k1) == k_max || std::abs(k2) == k_max) edge = std::max(edge, std::abs(acc));
      }
  }
  if (edge > 1e-10 * std::max(peak, 1e-300))
    throw Error(Errc::SymbolNotResolvable, "symbol '" + sym.name + "' has Fourier mass at |k| = " +
                                               std::to_string(k_max) + " (ratio " + std::to_string(edge / peak) +
                                               "); raise fft_k_max");
  return t;
}

template <class Scalar>
Scalar narrow(cd v) {
  if constexpr (std::is_same_v<Scalar, double>) {
    if (std::abs(v.imag()) > 1e-13)
      throw Error(Errc::SymbolNotResolvable, "real Weyl matrix requested but an entry has imaginary part " +
                                                 std::to_string(v.imag()));
    return v.real();
  } else {
    return v;
  }
}

}  // namespace

template <class Scalar>
WeylMatrix<Scalar> weyl_matrix(const SymbolField& sym, double h, int n_max, const WeylOptions& opt) {
  if (sym.dim != 1 && sym.dim != 2) throw Error(Errc::InvalidArgument, "Weyl quantization needs d in {1, 2}");
  if (sym.dim == 2 && sym.angle_mask != 0b11)
    throw Error(Errc::InvalidArgument, "Weyl quantization on T^2 needs both coordinates periodic");
  if (!(h > 0.0) || n_max < 1) throw Error(Errc::InvalidArgument, "need h > 0 and n_max >= 1");
  WeylMatrix<Scalar> W;
  W.h = h;
  W.lattice = ModeLattice{sym.dim, n_max};
  if (W.lattice.size() > kMaxDenseDim)
    throw Error(Errc::InvalidArgument, "lattice dimension " + std::to_string(W.lattice.size()) + " exceeds " +
                                           std::to_string(kMaxDenseDim));
  char tag[96];
  std::snprintf(tag, sizeof tag, "|h=%.17g|n_max=%d", h, n_max);
  W.symbol_hash = sym.name + tag;
  const Eigen::Index N = W.lattice.size();
  W.entries = DenseMatrix<Scalar>::Zero(N, N);

  if (!sym.x_modes.empty()) {
    for (Eigen::Index col = 0; col < N; ++col) {
      const auto n = W.lattice.mode(col);
      for (const auto& xm : sym.x_modes) {
        const std::array<int, 2> m{n[0] + xm.k[0], n[1] + xm.k[1]};
        if (!W.lattice.contains(m)) continue;
        const std::array<double, 2> xi{0.5 * h * (m[0] + n[0]), 0.5 * h * (m[1] + n[1])};
        const cd v = xm.coeff(std::span<const double>(xi.data(), sym.dim));
        if (std::abs(v) <= opt.drop_tol) continue;
        W.entries(W.lattice.index(m), col) += narrow<Scalar>(v);
      }
    }
    return W;
  }
  if (opt.fft_k_max <= 0 || !sym.value)
    throw Error(Errc::SymbolNotResolvable, "symbol '" + sym.name + "' has no x-modes and fft_k_max is unset");
  const DftTable t = build_dft_table(sym, h, n_max, opt.fft_k_max);
  const int kx = opt.fft_k_max, ky = sym.dim == 2 ? opt.fft_k_max : 0;
  for (Eigen::Index col = 0; col < N; ++col) {
    const auto n = W.lattice.mode(col);
    for (int k1 = -kx; k1 <= kx; ++k1)
      for (int k2 = -ky; k2 <= ky; ++k2) {
        const std::array<int, 2> m{n[0] + k1, n[1] + k2};
        if (!W.lattice.contains(m)) continue;
        const cd v = t.coeff[t.s_index({m[0] + n[0], m[1] + n[1]})][t.k_index({k1, k2})];
        if (std::abs(v) <= std::max(opt.drop_tol, 1e-15)) continue;
        W.entries(W.lattice.index(m), col) += narrow<Scalar>(v);
      }
  }
  return W;
}

template WeylMatrix<double> weyl_matrix(const SymbolField&, double, int, const WeylOptions&);
template WeylMatrix<std::complex<double>> weyl_matrix(const SymbolField&, double, int, const WeylOptions&);

Eigen::VectorXd solve_1d(const SymbolField& p, double h, int n_max, const WeylOptions& opt) {
  if (p.dim != 1) throw Error(Errc::InvalidArgument, "solve_1d needs a 1-D symbol");
  const auto W = weyl_matrix<std::complex<double>>(p, h, n_max, opt);
  return hermitian_eigensolve<std::complex<double>>(W.entries, false).values;
}

}  // namespace mjsc
