#include "mjsc/models.hpp"

#include "mjsc/roots.hpp"

#include <algorithm>
#include <memory>

namespace mjsc {

double TrigPolynomial::operator()(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& t : terms) {
    double arg = t.k[0] * x[0];
    if (dim == 2) arg += t.k[1] * x[1];
    v += t.a * std::cos(arg) + t.b * std::sin(arg);
  }
  return v;
}

std::array<double, 2> TrigPolynomial::gradient(std::span<const double> x) const {
  std::array<double, 2> g{0.0, 0.0};
  for (const auto& t : terms) {
    double arg = t.k[0] * x[0];
    if (dim == 2) arg += t.k[1] * x[1];
    const double d = -t.a * std::sin(arg) + t.b * std::cos(arg);
    g[0] += t.k[0] * d;
    if (dim == 2) g[1] += t.k[1] * d;
  }
  return g;
}

double TrigPolynomial::grid_max(int n) const {
  double m = -std::numeric_limits<double>::infinity();
  const int n2 = dim == 2 ? n : 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n2; ++j) {
      const std::array<double, 2> x{kTwoPi * i / n, kTwoPi * j / n};
      m = std::max(m, (*this)(x));
    }
  return m;
}

CoMetric CoMetric::identity() { return diagonal(1.0, 1.0); }

CoMetric CoMetric::diagonal(double g11, double g22) {
  CoMetric m;
  m.g = [g11, g22](std::span<const double>) {
    Eigen::Matrix2d G;
    G << g11, 0.0, 0.0, g22;
    return G;
  };
  m.constant = true;
  return m;
}

namespace {

Eigen::Vector2d momentum(const PhasePoint& p) { return {p.xi[0], p.xi[1]}; }

std::span<const double> pos(const PhasePoint& p) { return {p.x.data(), 2}; }

void add_trig_modes(SymbolField& s, const TrigPolynomial& V, double sign) {
  for (const auto& t : V.terms) {
    // a cos + b sin = (a - i b)/2 e^{i k x} + (a + i b)/2 e^{-i k x}
    const std::complex<double> cp(0.5 * t.a * sign, -0.5 * t.b * sign);
    if (t.k[0] == 0 && t.k[1] == 0) {
      const double c0 = t.a * sign;
      s.x_modes.push_back({{0, 0}, [c0](std::span<const double>) { return std::complex<double>(c0); }});
      continue;
    }
    s.x_modes.push_back({t.k, [cp](std::span<const double>) { return cp; }});
    s.x_modes.push_back({{-t.k[0], -t.k[1]}, [cp](std::span<const double>) { return std::conj(cp); }});
  }
}

}  // namespace

MjPair build_mechanical_pair(const CoMetric& metric, const TrigPolynomial& V, double E) {
  const int d = V.dim;
  const double vmax = V.grid_max(64);
  if (E <= vmax)
    throw Error(Errc::EnergyBelowPotential,
                "E = " + std::to_string(E) + " <= max V = " + std::to_string(vmax));
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < (d == 2 ? 64 : 1); ++j) {
      const std::array<double, 2> x{kTwoPi * i / 64, kTwoPi * j / 64};
      Eigen::Matrix2d G = metric.g(x);
      if (d == 1) G(1, 1) = 1.0;
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(G, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < 1e-10)
        throw Error(Errc::DegenerateMetric, "co-metric eigenvalue below 1e-10");
    }

  auto g = metric.g;
  auto pot = std::make_shared<const TrigPolynomial>(V);
  const bool constant = metric.constant;
  const unsigned mask = d == 2 ? 0b11u : 0b01u;

  auto kinetic = [g, d](const PhasePoint& p) {
    Eigen::Vector2d xi = momentum(p);
    if (d == 1) return g(pos(p))(0, 0) * xi[0] * xi[0];
    return double(xi.dot(g(pos(p)) * xi));
  };

  MjPair pair;
  pair.kind = "mechanical";
  pair.E = E;
  pair.calE = 1.0;

  SymbolField H;
  H.dim = d;
  H.name = "H_mechanical";
  H.angle_mask = mask;
  H.time_reversal = true;
  H.value = [kinetic, pot](const PhasePoint& p) { return kinetic(p) + (*pot)(pos(p)); };
  SymbolField calH;
  calH.dim = d;
  calH.name = "calH_jacobi";
  calH.angle_mask = mask;
  calH.time_reversal = true;
  calH.value = [kinetic, pot, E](const PhasePoint& p) { return kinetic(p) / (E - (*pot)(pos(p))); };

  if (constant) {
    const Eigen::Matrix2d G0 = g(std::array<double, 2>{0.0, 0.0});
    H.analytic_grad = [G0, pot, d](const PhasePoint& p) {
      State s(2 * d);
      const auto gv = pot->gradient(pos(p));
      Eigen::Vector2d xi = momentum(p);
      Eigen::Vector2d gx = 2.0 * G0 * xi;
      for (int j = 0; j < d; ++j) {
        s[j] = gv[j];
        s[d + j] = d == 1 ? 2.0 * G0(0, 0) * xi[0] : gx[j];
      }
      return s;
    };
    calH.analytic_grad = [G0, pot, d, E](const PhasePoint& p) {
      State s(2 * d);
      const double w = E - (*pot)(pos(p));
      const auto gv = pot->gradient(pos(p));
      Eigen::Vector2d xi = momentum(p);
      const double kin = d == 1 ? G0(0, 0) * xi[0] * xi[0] : double(xi.dot(G0 * xi));
      Eigen::Vector2d gx = 2.0 * G0 * xi;
      for (int j = 0; j < d; ++j) {
        s[j] = kin * gv[j] / (w * w);
        s[d + j] = (d == 1 ? 2.0 * G0(0, 0) * xi[0] : gx[j]) / w;
      }
      return s;
    };
    // x-Fourier modes of H: the kinetic part sits in mode 0.
    H.x_modes.push_back({{0, 0}, [G0, d](std::span<const double> xi) {
                           if (d == 1) return std::complex<double>(G0(0, 0) * xi[0] * xi[0]);
                           Eigen::Vector2d v(xi[0], xi[1]);
                           return std::complex<double>(v.dot(G0 * v));
                         }});
    add_trig_modes(H, V, 1.0);
  }
  pair.H = std::move(H);
  pair.calH = std::move(calH);
  return pair;
}

MjPair build_liouville_pair(const TrigPolynomial& a_of_x1, const TrigPolynomial& b_of_x2) {
  TrigPolynomial V;
  V.dim = 2;
  for (auto t : a_of_x1.terms) {
    t.k = {t.k[0], 0};
    t.a = -t.a;
    t.b = -t.b;
    V.terms.push_back(t);
  }
  for (auto t : b_of_x2.terms) {
    t.k = {0, t.k[0]};
    t.a = -t.a;
    t.b = -t.b;
    V.terms.push_back(t);
  }
  MjPair pair = build_mechanical_pair(CoMetric::identity(), V, 0.0);
  pair.kind = "liouville";
  return pair;
}

double WaterWaveSymbol::eval(std::span<const double> x, double r) const {
  return r * (1.0 + surface_tension(x) * r * r) * std::tanh(depth_D(x) * r);
}

std::function<double(std::span<const double> x)> waterwave_matched_g(const WaterWaveSymbol& w, double E) {
  if (!(E > 0.0)) throw Error(Errc::InvalidArgument, "water-wave energy must be > 0");
  auto ww = std::make_shared<const WaterWaveSymbol>(w);
  return [ww, E](std::span<const double> x) {
    const std::array<double, 2> xx{x[0], x.size() > 1 ? x[1] : 0.0};
    auto f = [&](double r) { return ww->eval(xx, r) - E; };
    const auto k = ray_root(f, 0.25, 1e6);
    if (!k) throw Error(Errc::SurfaceNotFound, "dispersion relation has no root");
    return 1.0 / (*k * *k);
  };
}

MjPair build_waterwave_pair(const WaterWaveSymbol& w,
                            const std::function<double(std::span<const double> x)>& liouville_g,
                            double E, bool strict, double tol) {
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) {
      const std::array<double, 2> x{kTwoPi * i / 64, kTwoPi * j / 64};
      if (!(w.depth_D(x) > 0.0)) throw Error(Errc::NegativeDepth, "depth D <= 0 on the sample grid");
      if (w.surface_tension(x) < 0.0) throw Error(Errc::InvalidArgument, "surface tension < 0");
      if (!(liouville_g(x) > 0.0)) throw Error(Errc::DegenerateMetric, "Liouville factor g <= 0");
    }
  MjPair pair;
  pair.kind = "waterwave";
  pair.E = E;
  pair.calE = 1.0;
  auto ww = std::make_shared<const WaterWaveSymbol>(w);
  auto gfun = liouville_g;

  pair.H.dim = 2;
  pair.H.name = "H_waterwave";
  pair.H.time_reversal = true;
  pair.H.value = [ww](const PhasePoint& p) {
    return ww->eval(pos(p), std::hypot(p.xi[0], p.xi[1]));
  };
  pair.calH.dim = 2;
  pair.calH.name = "calH_liouville";
  pair.calH.time_reversal = true;
  pair.calH.value = [gfun](const PhasePoint& p) {
    return (p.xi[0] * p.xi[0] + p.xi[1] * p.xi[1]) * gfun(pos(p));
  };
  pair.consistency = mj_consistency_report(pair, 16, 16);
  if (strict && pair.consistency->max_defect > tol)
    throw Error(Errc::MjcDefectAboveTolerance,
                "surface mismatch " + std::to_string(pair.consistency->max_defect));
  return pair;
}

std::array<double, 2> golden_frequencies() { return {1.0, 0.5 * (1.0 + std::sqrt(5.0))}; }

FourierTaylorSeries standard_bnf_series(double eps, int k_max, int deg_max) {
  using F = FourierTaylorSeries;
  const auto w = golden_frequencies();
  F H(2, k_max, deg_max);
  H.add_term(TermIndex{{0, 0}, {1, 0}}, w[0]);
  H.add_term(TermIndex{{0, 0}, {0, 1}}, w[1]);
  H.add_term(TermIndex{{0, 0}, {2, 0}}, 0.5);
  H.add_term(TermIndex{{0, 0}, {1, 1}}, 0.3);
  H += F::cosine(2, k_max, deg_max, {1, 1}, {1, 0}, eps);
  H += F::cosine(2, k_max, deg_max, {1, 0}, {2, 0}, eps);
  H += F::sine(2, k_max, deg_max, {1, -1}, {1, 1}, eps);
  H += F::cosine(2, k_max, deg_max, {0, 1}, {0, 2}, 0.5 * eps);
  H += F::cosine(2, k_max, deg_max, {1, 1}, {3, 0}, eps);
  H += F::sine(2, k_max, deg_max, {2, -1}, {0, 3}, 0.5 * eps);
  H += F::cosine(2, k_max, deg_max, {1, 0}, {2, 2}, eps);
  return H;
}

FourierTaylorSeries larmor_series(double eps, int k_max, int deg_max) {
  using F = FourierTaylorSeries;
  F H(2, k_max, deg_max);
  H += F::cosine(2, k_max, deg_max, {0, 0}, {1, 0}, 2.0);
  H += F::cosine(2, k_max, deg_max, {0, 1}, {1, 0}, -1.0);
  H += F::cosine(2, k_max, deg_max, {0, 0}, {0, 2}, 0.5);
  H += F::cosine(2, k_max, deg_max, {1, 0}, {2, 0}, eps);
  H += F::sine(2, k_max, deg_max, {1, 1}, {1, 1}, eps);
  H += F::cosine(2, k_max, deg_max, {1, -1}, {0, 3}, eps);
  return H;
}

MjPair build_series_pair(const FourierTaylorSeries& s, double E) {
  MjPair pair;
  pair.kind = "custom_fourier";
  pair.H = SymbolField::from_series(s, "H_series");
  pair.calH = pair.H;
  pair.calH.name = "calH_series";
  pair.E = E;
  pair.calE = E;
  return pair;
}

std::optional<PhasePoint> surface_point(const SymbolField& H, double E, std::array<double, 2> x,
                                        double theta) {
  const std::array<double, 2> dir = H.dim == 2 ? std::array<double, 2>{std::cos(theta), std::sin(theta)}
                                               : std::array<double, 2>{std::cos(theta) >= 0 ? 1.0 : -1.0, 0.0};
  auto f = [&](double r) {
    return H.eval(PhasePoint(H.dim, x, {r * dir[0], r * dir[1]}, H.angle_mask)) - E;
  };
  auto r = ray_root(f);
  if (!r) return std::nullopt;
  return PhasePoint(H.dim, x, {*r * dir[0], *r * dir[1]}, H.angle_mask);
}

double mj_multiplier(const MjPair& pair, const PhasePoint& p) {
  const double dH = pair.H.eval(p) - pair.E;
  if (std::abs(dH) > 1e-8) return (pair.calH.eval(p) - pair.calE) / dH;
  const State gH = pair.H.grad(p);
  const double n2 = gH.squaredNorm();
  if (std::sqrt(n2) <= 1e-8)
    throw Error(Errc::MultiplierSingular, "on-surface point with vanishing grad H");
  const State gC = pair.calH.grad(p);
  return gC.dot(gH) / n2;
}

MjcReport mj_consistency_report(const MjPair& pair, int n_rays, int n_angles) {
  if (n_rays < 4 || n_angles < 4)
    throw Error(Errc::InvalidArgument, "mj_consistency_report needs n_rays, n_angles >= 4");
  const SymbolField& H = pair.H;
  MjcReport rep;
  rep.min_multiplier = std::numeric_limits<double>::infinity();
  rep.max_multiplier = -std::numeric_limits<double>::infinity();
  const int n2 = H.dim == 2 ? n_angles : 1;
  int idx = 0;
  for (int i = 0; i < n_angles; ++i)
    for (int j = 0; j < n2; ++j, ++idx) {
      std::array<double, 2> x{0.0, 0.0};
      x[0] = H.x_lo[0] + (H.x_hi[0] - H.x_lo[0]) * (i + 0.5) / n_angles;
      if (H.dim == 2) x[1] = H.x_lo[1] + (H.x_hi[1] - H.x_lo[1]) * (j + 0.5) / n2;
      for (int r = 0; r < n_rays; ++r) {
        const double theta = kTwoPi * (r + 0.5) / n_rays;
        auto p = surface_point(H, pair.E, x, theta);
        if (!p || std::abs(H.eval(*p) - pair.E) > 1e-10) {
          rep.failed_rays.emplace_back(idx, r);
          continue;
        }
        ++rep.n_points;
        rep.max_defect = std::max(rep.max_defect, std::abs(pair.calH.eval(*p) - pair.calE));
        const double c = mj_multiplier(pair, *p);
        rep.min_multiplier = std::min(rep.min_multiplier, c);
        rep.max_multiplier = std::max(rep.max_multiplier, c);
      }
    }
  if (rep.n_points == 0) throw Error(Errc::SurfaceNotFound, "no surface point on any ray");
  return rep;
}

}  // namespace mjsc
