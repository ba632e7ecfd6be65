#include "mjsc/bnf.hpp"

#include "mjsc/flow.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

namespace mjsc {

FourierTaylorSeries homological_solve(const FourierTaylorSeries& rhs, std::span<const double> omega,
                                      double dio_guard) {
  if (int(omega.size()) != rhs.dim())
    throw Error(Errc::InvalidArgument, "homological_solve: omega has wrong dimension");
  FourierTaylorSeries g(rhs.dim(), rhs.k_max(), rhs.deg_max());
  rhs.for_each([&](const TermIndex& t, FourierTaylorSeries::Coeff c) {
    if (t.angle_free())
      throw Error(Errc::InvalidArgument, "homological_solve: rhs has a nonzero angle average");
    double kw = 0.0;
    for (int j = 0; j < rhs.dim(); ++j) kw += t.k[j] * omega[j];
    if (std::abs(kw) < dio_guard)
      throw Error(Errc::SmallDivisor, "|<k, omega>| = " + std::to_string(std::abs(kw)) + " at k = (" +
                                          std::to_string(t.k[0]) + ", " + std::to_string(t.k[1]) + ")");
    g.add_term(t, c / FourierTaylorSeries::Coeff(0.0, kw));
  });
  return g;
}

double BnfResult::normal_form_value(std::span<const double> iota) const {
  const std::array<double, 2> zero{0.0, 0.0};
  return normal_form.eval(std::span<const double>(zero.data(), normal_form.dim()), iota);
}

namespace {

// Removes the angle-dependent terms of one Taylor degree (rounding residue
// left after the homological step).
FourierTaylorSeries drop_angle_terms(const FourierTaylorSeries& s, int degree) {
  FourierTaylorSeries out(s.dim(), s.k_max(), s.deg_max());
  s.for_each([&](const TermIndex& t, FourierTaylorSeries::Coeff c) {
    if (t.degree() == degree && !t.angle_free()) return;
    out.add_term(t, c);
  });
  return out;
}

}  // namespace

BnfResult bnf_normalize(const FourierTaylorSeries& H, std::span<const double> omega, int N,
                        const BnfOptions& opt) {
  const int d = H.dim();
  if (int(omega.size()) != d) throw Error(Errc::InvalidArgument, "bnf_normalize: omega dimension");
  if (N < 0) throw Error(Errc::InvalidArgument, "bnf_normalize: N must be >= 0");
  if (N + 1 > H.deg_max())
    throw Error(Errc::TruncationOverflow, "bnf_normalize: N + 1 exceeds the series degree cap");
  if (!H.degree_part(0).angle_dependent().empty())
    throw Error(Errc::InvalidArgument, "bnf_normalize: degree-0 part must be constant");
  for (int j = 0; j < d; ++j) {
    TermIndex t;
    t.a[j] = 1;
    const auto c = H.coefficient(t);
    if (std::abs(c - FourierTaylorSeries::Coeff(omega[j])) > 1e-12)
      throw Error(Errc::InvalidArgument, "bnf_normalize: linear part is not <omega, iota>");
  }

  BnfResult r;
  r.N = N;
  r.omega.assign(omega.begin(), omega.end());
  r.E0 = H.coefficient(TermIndex{}).real();
  FourierTaylorSeries Hc = H;
  std::vector<double> w(omega.begin(), omega.end());

  auto step = [&](int degree, int order, bool keep_residue) {
    const FourierTaylorSeries R = Hc.degree_part(degree).angle_dependent();
    FourierTaylorSeries g(d, H.k_max(), H.deg_max());
    if (!R.empty()) {
      try {
        g = homological_solve(R, w, opt.dio_guard);
      } catch (const Error& e) {
        if (e.code() == Errc::SmallDivisor)
          throw Error(Errc::SmallDivisor, std::string(e.what()) + " (order " + std::to_string(order) + ")");
        throw;
      }
      Hc = lie_transform(g, Hc);
      if (!keep_residue) Hc = drop_angle_terms(Hc, degree);
    }
    r.generators.push_back(std::move(g));
  };

  // Brackets with a degree-1 generator keep the degree, so one step leaves
  // an O(eps^2) angle residue at degree 1; repeat until it is at rounding level.
  for (int pass = 0; pass < 60; ++pass) {
    const double residue = Hc.degree_part(1).angle_dependent().max_abs();
    if (residue <= 1e-15) {
      if (pass == 0) r.generators.emplace_back(d, H.k_max(), H.deg_max());
      Hc = drop_angle_terms(Hc, 1);
      break;
    }
    step(1, 0, true);
  }
  // Averaged second-order terms shift the linear part; later orders solve
  // against the shifted frequencies.
  for (int j = 0; j < d; ++j) {
    TermIndex t;
    t.a[j] = 1;
    w[j] = Hc.coefficient(t).real();
  }
  r.omega_eff = w;
  for (int m = 1; m <= N; ++m) {
    if (opt.skip_last && m == N) {
      r.generators.emplace_back(d, H.k_max(), H.deg_max());
      continue;
    }
    step(m + 1, m, false);
  }
  r.transformed = Hc;
  r.normal_form = Hc.degree_range(0, N + 1).angle_average();
  r.remainder_series = Hc - r.normal_form;
  return r;
}

State generator_flow(const FourierTaylorSeries& g, const State& y, int steps) {
  const int d = g.dim();
  auto field = [&g, d](const State& s) {
    const State gr = g.gradient(std::span<const double>(s.data(), d), std::span<const double>(s.data() + d, d));
    State f(2 * d);
    for (int j = 0; j < d; ++j) {
      f[j] = gr[d + j];
      f[d + j] = -gr[j];
    }
    return f;
  };
  State z = y;
  const double h = 1.0 / steps;
  for (int i = 0; i < steps; ++i) z = gbs_step(field, z, h);
  return z;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ProbeResult remainder_order_probe(const BnfResult& result, const FourierTaylorSeries& H,
                                  const std::vector<double>& radii, int flow_steps) {
  if (radii.size() < 4) throw Error(Errc::InvalidArgument, "probe needs at least 4 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0 && radii[i] <= 0.1)) throw Error(Errc::InvalidArgument, "probe radii must lie in (0, 0.1]");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw Error(Errc::InvalidArgument, "probe radii must decrease");
  }
  const int d = H.dim();
  const int na = 32;
  const int n2 = d == 2 ? na : 1;
  std::vector<std::array<double, 2>> dirs;
  if (d == 2) {
    for (int j = 0; j < 4; ++j) {
      const double th = kPi * (2 * j + 1) / 4.0 + 0.1;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    dirs = {{1.0, 0.0}, {-1.0, 0.0}};
  }
  std::vector<const FourierTaylorSeries*> active;
  for (const auto& g : result.generators)
    if (!g.empty()) active.push_back(&g);

  ProbeResult out;
  out.radii = radii;
  for (double r : radii) {
    double worst = 0.0;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < n2; ++j)
        for (const auto& dir : dirs) {
          State y(2 * d);
          y[0] = kTwoPi * i / na;
          if (d == 2) y[1] = kTwoPi * j / na;
          for (int c = 0; c < d; ++c) y[d + c] = r * dir[c];
          const State iota = y.tail(d);
          for (auto it = active.rbegin(); it != active.rend(); ++it) y = generator_flow(**it, y, flow_steps);
          const double lhs = H.eval(std::span<const double>(y.data(), d), std::span<const double>(y.data() + d, d));
          const double rhs = result.normal_form_value(std::span<const double>(iota.data(), d));
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    out.residuals.push_back(worst);
  }
  const double top = *std::max_element(out.residuals.begin(), out.residuals.end());
  if (top <= 1e-14) {
    out.exact = true;
    out.slope = std::numeric_limits<double>::infinity();
  } else {
    std::vector<double> res = out.residuals;
    for (double& v : res) v = std::max(v, 1e-300);
    out.slope = loglog_slope(radii, res);
  }
  return out;
}

void write_normal_form_csv(std::ostream& os, const BnfResult& r) {
  os << "a1,a2,coefficient\n";
  char buf[128];
  r.normal_form.for_each([&](const TermIndex& t, FourierTaylorSeries::Coeff c) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", t.a[0], t.a[1], c.real());
    os << buf;
  });
}

}  // namespace mjsc
