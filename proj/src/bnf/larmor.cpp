#include "mjsc/bnf.hpp"

#include "mjsc/roots.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <limits>

namespace mjsc {

namespace {

using Coeff = FourierTaylorSeries::Coeff;

double eval_x2(const FourierTaylorSeries& s, double x2) {
  const std::array<double, 2> x{0.0, x2};
  const std::array<double, 2> xi{0.0, 0.0};
  return s.eval(x, xi);
}

// Fourier series (in x2) of 1 / omega1, truncated to k_max.
FourierTaylorSeries reciprocal_series(const FourierTaylorSeries& omega1, int k_max, int deg_max) {
  const int M = 512;
  std::vector<double> v(M);
  for (int i = 0; i < M; ++i) v[i] = 1.0 / eval_x2(omega1, kTwoPi * i / M);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, v);
  FourierTaylorSeries out(2, k_max, deg_max);
  for (int k = -k_max; k <= k_max; ++k) {
    const Coeff c = spec[(k + M) % M] / double(M);
    if (std::abs(c) > 1e-17) out.add_term(TermIndex{{0, k}, {0, 0}}, c);
  }
  return out;
}

// F -> (1 / omega1) d_x1^{-1} F on x1-dependent series.
FourierTaylorSeries apply_A_inverse(const FourierTaylorSeries& F, const FourierTaylorSeries& inv) {
  const FourierTaylorSeries P = multiply(inv, F);
  FourierTaylorSeries out(F.dim(), F.k_max(), F.deg_max());
  P.for_each([&](const TermIndex& t, Coeff c) {
    if (t.k[0] == 0) return;
    out.add_term(t, c / Coeff(0.0, double(t.k[0])));
  });
  return out;
}

// F -> omega1'(x2) xi1 d_xi2 F.
FourierTaylorSeries apply_N(const FourierTaylorSeries& F, const FourierTaylorSeries& omega1_prime) {
  const FourierTaylorSeries xi1 = FourierTaylorSeries::action(2, F.k_max(), F.deg_max(), 0);
  return multiply(omega1_prime, multiply(xi1, F.d_action(1)));
}

}  // namespace

double LarmorReduction::omega1(double x2) const { return eval_x2(omega1_series, x2); }

double LarmorReduction::omega1_d(double x2, int order) const {
  FourierTaylorSeries s = omega1_series;
  for (int i = 0; i < order; ++i) s = s.d_angle(1);
  return eval_x2(s, x2);
}

double LarmorReduction::b(int i, int j, double x2) const {
  TermIndex t;
  t.a[i] += 1;
  t.a[j] += 1;
  double v = 0.0;
  effective_H.for_each([&](const TermIndex& u, Coeff c) {
    if (u.a != t.a) return;
    v += (c * std::exp(Coeff(0.0, u.k[1] * x2))).real();
  });
  return i == j ? v : 0.5 * v;
}

LarmorReduction rational_average(const FourierTaylorSeries& H, int N) {
  if (H.dim() != 2) throw Error(Errc::InvalidArgument, "rational_average needs d = 2");
  if (N < 2 || N > H.deg_max()) throw Error(Errc::InvalidArgument, "rational_average: need 2 <= N <= deg_max");
  LarmorReduction red;
  red.N = N;
  red.omega1_series = FourierTaylorSeries(2, H.k_max(), H.deg_max());
  H.for_each([&](const TermIndex& t, Coeff c) {
    if (t.degree() == 0 && t.k[0] != 0)
      throw Error(Errc::InvalidArgument, "rational_average: H0 must not depend on x1");
    if (t.degree() != 1) return;
    if (t.a[1] == 1 || t.k[0] != 0)
      throw Error(Errc::InvalidArgument, "rational_average: linear part must be omega1(x2) xi1");
    red.omega1_series.add_term(TermIndex{t.k, {0, 0}}, c);
  });
  red.min_omega1 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 512; ++i) red.min_omega1 = std::min(red.min_omega1, red.omega1(kTwoPi * i / 512));
  if (!(red.min_omega1 > 0.0))
    throw Error(Errc::FrequencyVanishes, "min omega1 = " + std::to_string(red.min_omega1));

  const FourierTaylorSeries inv = reciprocal_series(red.omega1_series, H.k_max(), H.deg_max());
  const FourierTaylorSeries omega1_prime = red.omega1_series.d_angle(1);
  FourierTaylorSeries Hc = H;
  for (int degree = 2; degree <= N; ++degree) {
    FourierTaylorSeries R(2, H.k_max(), H.deg_max());
    Hc.degree_part(degree).for_each([&](const TermIndex& t, Coeff c) {
      if (t.k[0] != 0) R.add_term(t, c);
    });
    FourierTaylorSeries S(2, H.k_max(), H.deg_max());
    if (!R.empty()) {
      // (A - N) S = R with N nilpotent: S = A^{-1} sum_j (N A^{-1})^j R.
      FourierTaylorSeries term = apply_A_inverse(R, inv);
      S = term;
      for (int j = 0; j < degree && !term.empty(); ++j) {
        term = apply_A_inverse(apply_N(term, omega1_prime), inv);
        S += term;
      }
      Hc = lie_transform(S, Hc);
    }
    red.generators.push_back(std::move(S));
  }
  red.effective_H = FourierTaylorSeries(2, H.k_max(), H.deg_max());
  Hc.for_each([&](const TermIndex& t, Coeff c) {
    if (t.k[0] == 0 && t.degree() <= N) red.effective_H.add_term(t, c);
  });

  red.min_curvature = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 512; ++i)
    red.min_curvature = std::min(red.min_curvature, std::abs(2.0 * red.b(1, 1, kTwoPi * i / 512)));
  red.nondegenerate = red.min_curvature > 1e-8;
  return red;
}

LarmorOperator larmor_operator(const LarmorReduction& red, double k1, bool quadratic_model) {
  const int k_max = red.effective_H.k_max();
  const int deg_max = red.effective_H.deg_max();
  FourierTaylorSeries s(1, k_max, deg_max);
  if (quadratic_model) {
    s.add_term(TermIndex{{0, 0}, {2, 0}}, 0.5);
    red.omega1_series.for_each([&](const TermIndex& t, Coeff c) {
      s.add_term(TermIndex{{t.k[1], 0}, {0, 0}}, k1 * c);
    });
  } else {
    red.effective_H.for_each([&](const TermIndex& t, Coeff c) {
      s.add_term(TermIndex{{t.k[1], 0}, {t.a[1], 0}}, c * std::pow(k1, t.a[0]));
    });
  }
  LarmorOperator op;
  op.k1 = k1;
  op.series = s;
  op.symbol = SymbolField::from_series(s, quadratic_model ? "larmor_quadratic" : "larmor_effective");
  op.symbol.angle_mask = 0b01;
  op.symbol.time_reversal = quadratic_model;
  if (k1 > 0.0) op.regime = "wells at minima of omega1";
  else if (k1 < 0.0) op.regime = "inverted regime: wells at maxima of omega1";
  else op.regime = "free";
  return op;
}

CriticalReport critical_set_classify(const LarmorReduction& red, int grid) {
  if (!red.nondegenerate)
    throw Error(Errc::NondegeneracyFailed, "d^2 H'/d xi2^2 vanishes somewhere on the x2 grid");
  CriticalReport rep;
  rep.sigma1_codim2 = true;
  std::vector<double> d(grid);
  double dmax = 0.0;
  for (int i = 0; i < grid; ++i) {
    d[i] = red.omega1_d(kTwoPi * i / grid, 1);
    dmax = std::max(dmax, std::abs(d[i]));
  }
  if (dmax < 1e-12) {
    rep.degenerate_family = true;
    rep.morse = false;
    return rep;
  }
  auto fprime = [&red](double x) { return red.omega1_d(x, 1); };
  for (int i = 0; i < grid; ++i) {
    const int j = (i + 1) % grid;
    double x;
    if (d[i] == 0.0) {
      x = kTwoPi * i / grid;
    } else if (d[i] * d[j] < 0.0) {
      const double a = kTwoPi * i / grid;
      x = wrap_angle(bracketed_root(fprime, a, a + kTwoPi / grid));
    } else {
      continue;
    }
    CriticalPoint c;
    c.x2 = x;
    c.omega1 = red.omega1(x);
    c.omega1_second = red.omega1_d(x, 2);
    if (std::abs(c.omega1_second) <= 1e-8) {
      c.kind = CriticalPoint::Kind::Degenerate;
    } else if (c.omega1_second > 0.0) {
      c.kind = CriticalPoint::Kind::Minimum;
      ++rep.minima;
    } else {
      c.kind = CriticalPoint::Kind::Maximum;
      ++rep.maxima;
    }
    rep.points.push_back(c);
  }
  rep.morse = std::none_of(rep.points.begin(), rep.points.end(),
                           [](const CriticalPoint& c) { return c.kind == CriticalPoint::Kind::Degenerate; });
  return rep;
}

}  // namespace mjsc
