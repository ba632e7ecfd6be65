#include "mjsc/models.hpp"
#include "mjsc/roots.hpp"

#include <doctest.h>

#include <random>

using namespace mjsc;

namespace {

// Coordinate functions x1 and xi1 on T*T^2.
SymbolField coordinate(bool momentum) {
  SymbolField f;
  f.dim = 2;
  f.name = momentum ? "xi1" : "x1";
  f.value = [momentum](const PhasePoint& p) { return momentum ? p.xi[0] : p.x[0]; };
  return f;
}

}  // namespace

TEST_CASE("poisson bracket of the canonical pair") {
  // {f, g} = sum_j (d_xi f d_x g - d_x f d_xi g)
  const SymbolField x1 = coordinate(false), xi1 = coordinate(true);
  const PhasePoint p(2, {1.0, 2.0}, {0.3, -0.4});
  CHECK(poisson_bracket(x1, xi1, p) == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(poisson_bracket(xi1, x1, p) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("poisson bracket is antisymmetric") {
  TrigPolynomial V;
  V.terms = {{{1, 0}, 0.1, 0.0}, {{1, 1}, 0.0, 0.2}};
  const MjPair pair = build_mechanical_pair(CoMetric::identity(), V, 1.0);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const PhasePoint p(2, {3 * u(rng), 3 * u(rng)}, {u(rng), u(rng)});
    CHECK(std::abs(poisson_bracket(pair.H, pair.H, p)) <= 1e-12);
    CHECK(poisson_bracket(pair.H, pair.calH, p) == doctest::Approx(-poisson_bracket(pair.calH, pair.H, p)));
  }
}

TEST_CASE("analytic gradient agrees with centered differences") {
  TrigPolynomial V;
  V.terms = {{{1, 0}, 0.1, 0.0}, {{0, 1}, 0.05, 0.02}};
  const MjPair pair = build_mechanical_pair(CoMetric::diagonal(1.0, 2.0), V, 1.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const PhasePoint p(2, {3 + 3 * u(rng), 3 + 3 * u(rng)}, {u(rng), u(rng)});
    for (const SymbolField* s : {&pair.H, &pair.calH}) {
      const State g = s->grad(p), fd = s->grad_fd(p);
      CHECK((g - fd).norm() <= 1e-5 * std::max(1.0, g.norm()));
    }
  }
}

TEST_CASE("roots") {
  // x = cos x, fixed point by iteration as the oracle
  double fp = 0.5;
  for (int i = 0; i < 200; ++i) fp = std::cos(fp);
  CHECK(bracketed_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0) == doctest::Approx(fp).epsilon(1e-14));

  const auto r = ray_root([](double r) { return r * r - 2.0; });
  REQUIRE(r);
  CHECK(*r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_FALSE(ray_root([](double) { return -1.0; }, 0.25, 10.0));
}

TEST_CASE("angles") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(7.0) == doctest::Approx(7.0 - kTwoPi));
  CHECK(angle_diff(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  const PhasePoint a(2, {0.05, 1.0}, {0.0, 0.0}), b(2, {kTwoPi - 0.05, 1.0}, {0.0, 0.0});
  CHECK(phase_distance(a, b) == doctest::Approx(0.1));
}

TEST_CASE("error codes carry their names") {
  const Error e(Errc::ConfigInvalid, "x");
  CHECK(e.code() == Errc::ConfigInvalid);
  CHECK(std::string(e.what()).rfind("ConfigInvalid", 0) == 0);
  CHECK(errc_name(Errc::SmallDivisor) == "SmallDivisor");
}
