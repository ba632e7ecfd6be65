#include "mjsc/bnf.hpp"
#include "mjsc/models.hpp"
#include "mjsc/quantize.hpp"
#include "mjsc/spectra.hpp"

#include <doctest.h>

#include <random>

using namespace mjsc;
using cd = std::complex<double>;

namespace {

constexpr int K = 6, D = 6;

FourierTaylorSeries iota(int j) { return FourierTaylorSeries::action(2, K, D, j); }

FourierTaylorSeries mode(std::array<int, 2> k, std::array<int, 2> a, cd c) {
  return FourierTaylorSeries::monomial(2, K, D, TermIndex{k, a}, c);
}

// <omega, iota> + eps cos(phi1) iota1^2
FourierTaylorSeries cos_model(std::array<double, 2> w, double eps) {
  return iota(0) * w[0] + iota(1) * w[1] + FourierTaylorSeries::cosine(2, K, D, {1, 0}, {2, 0}, eps);
}

// centered differences of the complex evaluation
cd numeric_bracket(const FourierTaylorSeries& f, const FourierTaylorSeries& g, std::array<double, 2> phi,
                   std::array<double, 2> io) {
  const double s = 1e-5;
  auto d = [&](const FourierTaylorSeries& h, int var, int j) {
    auto p = phi, q = phi;
    auto a = io, b = io;
    if (var == 0) {
      p[j] += s;
      q[j] -= s;
    } else {
      a[j] += s;
      b[j] -= s;
    }
    return (h.eval_complex(p, a) - h.eval_complex(q, b)) / (2 * s);
  };
  cd out = 0.0;
  for (int j = 0; j < 2; ++j) out += d(f, 1, j) * d(g, 0, j) - d(f, 0, j) * d(g, 1, j);
  return out;
}

std::vector<std::array<double, 4>> random_points(int n, double r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 4>> out;
  for (int i = 0; i < n; ++i) out.push_back({kPi * u(rng), kPi * u(rng), r * u(rng), r * u(rng)});
  return out;
}

}  // namespace

TEST_CASE("series arithmetic") {
  CHECK(multiply(iota(0), iota(0)).coefficient({{0, 0}, {2, 0}}) == cd(1.0));
  CHECK(multiply(iota(0), iota(0)).size() == 1);
  CHECK(angle_average(FourierTaylorSeries::cosine(2, K, D, {1, 0}, {0, 1}, 1.0)).empty());
  CHECK(angle_average(iota(1)).coefficient({{0, 0}, {0, 1}}) == cd(1.0));

  // {iota1, e^{i phi1}} = i e^{i phi1} with {f, g} = d_iota f d_phi g - d_phi f d_iota g
  const FourierTaylorSeries e = mode({1, 0}, {0, 0}, 1.0);
  const FourierTaylorSeries b = poisson(iota(0), e);
  CHECK(std::abs(b.coefficient({{1, 0}, {0, 0}}) - cd(0.0, 1.0)) <= 1e-15);

  const FourierTaylorSeries f = standard_bnf_series(0.05, K, D);
  const FourierTaylorSeries g = FourierTaylorSeries::sine(2, K, D, {1, 1}, {1, 1}, 0.3) + iota(0) * 0.7;
  for (const auto& p : random_points(20, 0.5, 1)) {
    const std::array<double, 2> phi{p[0], p[1]}, io{p[2], p[3]};
    CHECK(std::abs(poisson(f, g).eval_complex(phi, io) - numeric_bracket(f, g, phi, io)) <= 1e-8);
  }
}

TEST_CASE("bracket antisymmetry and Jacobi identity") {
  const FourierTaylorSeries f = FourierTaylorSeries::cosine(2, K, D, {1, 0}, {1, 0}, 0.4) + iota(1) * 0.3;
  const FourierTaylorSeries g = FourierTaylorSeries::sine(2, K, D, {0, 1}, {1, 1}, 0.2);
  const FourierTaylorSeries h = FourierTaylorSeries::cosine(2, K, D, {1, -1}, {0, 1}, 0.5);
  CHECK((poisson(f, g) + poisson(g, f)).max_abs() <= 1e-15);
  const FourierTaylorSeries jac =
      poisson(f, poisson(g, h)) + poisson(g, poisson(h, f)) + poisson(h, poisson(f, g));
  CHECK(jac.degree_range(0, D - 2).max_abs() <= 1e-14);
}

TEST_CASE("fast evaluator against the naive sum") {
  for (const FourierTaylorSeries& s : {standard_bnf_series(), larmor_series()}) {
    CHECK(s.is_real());
    for (const auto& p : random_points(100, 0.3, 2)) {
      const std::array<double, 2> phi{p[0], p[1]}, io{p[2], p[3]};
      const double fast = s.eval(phi, io);
      CHECK(std::abs(fast - s.eval_naive(phi, io).real()) <= 1e-12 * std::max(1.0, std::abs(fast)));
    }
  }
}

TEST_CASE("homological equation") {
  const std::array<double, 2> w = golden_frequencies();
  const FourierTaylorSeries g = homological_solve(mode({1, 0}, {0, 0}, 1.0), w);
  CHECK(std::abs(g.coefficient({{1, 0}, {0, 0}}) - cd(0.0, -1.0)) <= 1e-15);

  const FourierTaylorSeries rhs = FourierTaylorSeries::cosine(2, K, D, {1, 2}, {1, 0}, 0.3) +
                                  FourierTaylorSeries::sine(2, K, D, {3, -1}, {0, 2}, 0.2);
  const FourierTaylorSeries sol = homological_solve(rhs, w);
  const FourierTaylorSeries lhs = sol.d_angle(0) * w[0] + sol.d_angle(1) * w[1];
  for (const auto& p : random_points(50, 1.0, 3)) {
    const std::array<double, 2> phi{p[0], p[1]}, io{p[2], p[3]};
    CHECK(std::abs(lhs.eval(phi, io) - rhs.eval(phi, io)) <= 1e-10);
  }

  const std::array<double, 2> resonant{1.0, 1.0};
  CHECK_THROWS_WITH_AS(homological_solve(mode({1, -1}, {0, 0}, 1.0), resonant), doctest::Contains("SmallDivisor"),
                       Error);
}

TEST_CASE("angle-free input is already normal") {
  const std::array<double, 2> w = golden_frequencies();
  const FourierTaylorSeries H = iota(0) * w[0] + iota(1) * w[1] + multiply(iota(0), iota(1)) * 0.3;
  const BnfResult r = bnf_normalize(H, w, 2);
  CHECK((r.normal_form - H).max_abs() == 0.0);
  for (const auto& g : r.generators) CHECK(g.max_abs() == 0.0);
  const ProbeResult pr = remainder_order_probe(r, H, {0.08, 0.056, 0.04, 0.028});
  CHECK(pr.exact);
}

TEST_CASE("pure oscillation averages to zero") {
  const std::array<double, 2> w{1.0, std::sqrt(2.0)};
  const FourierTaylorSeries H = cos_model(w, 0.1);
  const BnfResult r = bnf_normalize(H, w, 2);
  CHECK(r.normal_form.angle_dependent().empty());
  CHECK(std::abs(r.normal_form.coefficient({{0, 0}, {2, 0}})) <= 1e-15);
  CHECK(std::abs(r.normal_form.coefficient({{0, 0}, {1, 0}}) - w[0]) <= 1e-12);
  CHECK(std::abs(r.normal_form.coefficient({{0, 0}, {0, 1}}) - w[1]) <= 1e-12);
  CHECK(r.remainder_series.min_degree() >= 2 + 2);
  CHECK(r.transformed.degree_range(0, 3).angle_dependent().max_abs() <= 1e-15);
}

TEST_CASE("Lie series against the integrated generator flow") {
  const std::array<double, 2> w = golden_frequencies();
  const FourierTaylorSeries H = standard_bnf_series();
  const BnfResult r = bnf_normalize(H, w, 2);
  const FourierTaylorSeries& g = r.generators.back();
  const FourierTaylorSeries lie = lie_transform(g, H);
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 4; ++j) {
      const double th = kPi * (2 * j + 1) / 4;
      State y(4);
      y << kTwoPi * i / 16, 0.7 * i, 0.05 * std::cos(th), 0.05 * std::sin(th);
      const State z = generator_flow(g, y, 16);
      const double ode = H.eval(std::span<const double>(z.data(), 2), std::span<const double>(z.data() + 2, 2));
      const double ls = lie.eval(std::span<const double>(y.data(), 2), std::span<const double>(y.data() + 2, 2));
      worst = std::max(worst, std::abs(ode - ls));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("remainder order") {
  const std::array<double, 2> w{1.0, std::sqrt(2.0)};
  const FourierTaylorSeries H = cos_model(w, 0.1);
  const std::vector<double> radii{0.08, 0.056, 0.04, 0.028, 0.02};
  const ProbeResult full = remainder_order_probe(bnf_normalize(H, w, 1), H, radii);
  CHECK(full.slope >= 2.7);
  BnfOptions ablate;
  ablate.skip_last = true;
  const ProbeResult cut = remainder_order_probe(bnf_normalize(H, w, 1, ablate), H, radii);
  CHECK(full.slope - cut.slope == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("normal form coefficients are stable when N grows") {
  const std::array<double, 2> w = golden_frequencies();
  const FourierTaylorSeries H = standard_bnf_series();
  const BnfResult r1 = bnf_normalize(H, w, 1), r2 = bnf_normalize(H, w, 2), r3 = bnf_normalize(H, w, 3);
  r1.normal_form.for_each([&](const TermIndex& t, cd c) {
    CHECK(r2.normal_form.coefficient(t) == c);
    CHECK(r3.normal_form.coefficient(t) == c);
  });
  r2.normal_form.for_each([&](const TermIndex& t, cd c) { CHECK(r3.normal_form.coefficient(t) == c); });
}

TEST_CASE("averaging near a rational torus") {
  // omega1 = 1, a = cos(x1) xi1^2: dS/dx1 = -cos x1 gives S = -sin(x1) xi1^2 and b = 0
  const FourierTaylorSeries H = iota(0) + FourierTaylorSeries::cosine(2, K, D, {1, 0}, {2, 0}, 1.0);
  const LarmorReduction red = rational_average(H, 2);
  CHECK(std::abs(red.b(0, 0, 0.4)) <= 1e-12);
  const FourierTaylorSeries S = red.generating_function(0);
  for (const auto& p : random_points(20, 0.5, 4)) {
    const std::array<double, 2> phi{p[0], p[1]}, io{p[2], p[3]};
    CHECK(std::abs(S.eval(phi, io) + std::sin(p[0]) * p[2] * p[2]) <= 1e-12);
  }
  red.effective_H.for_each([](const TermIndex& t, cd c) {
    if (t.degree() <= 2 && std::abs(c) > 0.0) CHECK(t.k[0] == 0);
  });

  // x1-independent input is returned unchanged
  const FourierTaylorSeries flat = iota(0) + FourierTaylorSeries::cosine(2, K, D, {0, 1}, {2, 0}, 0.5);
  const LarmorReduction same = rational_average(flat, 2);
  CHECK((same.effective_H - flat).max_abs() <= 1e-15);
  CHECK(same.generators.front().max_abs() == 0.0);
}

TEST_CASE("Larmor reduction of the bundled model") {
  const LarmorReduction red = rational_average(larmor_series(), 3);
  red.effective_H.for_each([](const TermIndex& t, cd c) {
    if (t.degree() <= 3 && std::abs(c) > 1e-14) CHECK(t.k[0] == 0);
  });
  CHECK(red.omega1(0.0) == doctest::Approx(1.0));
  CHECK(red.omega1_d(0.0, 2) == doctest::Approx(1.0));
  // b_ij(x2) is the x1-mean of a_ij: xi2^2 / 2 has no x1 dependence
  CHECK(red.b(1, 1, 0.7) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(red.nondegenerate);
  CHECK(red.min_curvature == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("critical set classification") {
  auto with_omega = [](FourierTaylorSeries w1) { return multiply(w1, iota(0)) + multiply(iota(1), iota(1)) * 0.5; };
  const FourierTaylorSeries one = FourierTaylorSeries::constant(2, K, D, 1.0);

  const CriticalReport a =
      critical_set_classify(rational_average(with_omega(one * 2.0 - FourierTaylorSeries::cosine(2, K, D, {0, 1}, {0, 0}, 1.0)), 2));
  REQUIRE(a.points.size() == 2);
  CHECK(a.morse);
  CHECK(a.minima == 1);
  CHECK(a.maxima == 1);
  CHECK(std::abs(angle_diff(a.points[0].x2, 0.0)) <= 1e-8);
  CHECK(std::abs(angle_diff(a.points[1].x2, kPi)) <= 1e-8);

  const CriticalReport b =
      critical_set_classify(rational_average(with_omega(one * 2.0 + FourierTaylorSeries::cosine(2, K, D, {0, 2}, {0, 0}, 1.0)), 2));
  REQUIRE(b.points.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    // scan oracle: criticals of 2 + cos 2x at multiples of pi/2, alternating max/min
    CHECK(std::abs(angle_diff(b.points[i].x2, kPi * i / 2)) <= 1e-8);
    CHECK((b.points[i].kind == CriticalPoint::Kind::Maximum) == (i % 2 == 0));
  }

  const CriticalReport c = critical_set_classify(rational_average(with_omega(one), 2));
  CHECK(c.degenerate_family);
  CHECK_FALSE(c.morse);
}

TEST_CASE("Larmor operator with constant frequency") {
  // 1/2 xi^2 + omega0 k1 is diagonal: eigenvalues 1/2 (h k)^2 + omega0 k1
  const FourierTaylorSeries H = iota(0) * 1.5 + multiply(iota(1), iota(1)) * 0.5;
  const LarmorOperator op = larmor_operator(rational_average(H, 2), 0.2, true);
  const double h = 0.1;
  const Eigen::VectorXd ev = solve_1d(op.symbol, h, 20);
  std::vector<double> exact;
  for (int k = -20; k <= 20; ++k) exact.push_back(0.5 * h * h * k * k + 1.5 * 0.2);
  std::sort(exact.begin(), exact.end());
  REQUIRE(ev.size() == Eigen::Index(exact.size()));
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(ev[Eigen::Index(i)] == doctest::Approx(exact[i]).epsilon(1e-12));
}

TEST_CASE("Larmor wells and the harmonic prediction") {
  const LarmorReduction red = rational_average(larmor_series(), 3);
  const LarmorOperator op = larmor_operator(red, 0.1, true);
  CHECK(op.regime == "wells at minima of omega1");
  const double h = 0.01;
  const Eigen::VectorXd ev = solve_1d(op.symbol, h, 140);
  for (int n = 0; n < 3; ++n) {
    const double harmonic = 0.1 + h * std::sqrt(0.1) * (n + 0.5);
    CHECK(std::abs(ev[n] - harmonic) <= 5.0 * std::pow(h, 1.5));
  }

  // k1 < 0: wells sit at the maxima of omega1, bound states lie below -k1 * min omega1
  const LarmorOperator inv = larmor_operator(red, -0.1, true);
  const Eigen::VectorXd ev2 = solve_1d(inv.symbol, h, 140);
  CHECK(ev2[0] < 0.1 * (-1.0));
  CHECK(ev2[0] >= -0.1 * 3.0 - 1e-12);
}
