#include "mjsc/kam.hpp"

#include <doctest.h>

using namespace mjsc;

namespace {

FrequencyMap quadratic_map() {
  return FrequencyMap::build([](const Eigen::Vector2d& I) { return 0.5 * I.squaredNorm(); },
                             [](const Eigen::Vector2d& I) { return I; }, linspace(-2.0, 2.0, 41),
                             linspace(-2.0, 2.0, 41));
}

// det [[domega/dI, omega], [omega^T, 0]] written out by hand
double bordered(const Eigen::Matrix2d& A, const Eigen::Vector2d& w) {
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  M.topLeftCorner<2, 2>() = A;
  M.topRightCorner<2, 1>() = w;
  M.bottomLeftCorner<1, 2>() = w.transpose();
  return M.determinant();
}

RotationProfile linear_profile(std::vector<double> mu) {
  std::vector<double> fp = mu;
  return RotationProfile::from_fprime(std::move(mu), std::move(fp));
}

}  // namespace

TEST_CASE("bordered determinant") {
  const FrequencyMap fm = quadratic_map();
  const Eigen::Vector2d I(0.5, 1.0);
  CHECK(isoenergetic_det(fm, I) == doctest::Approx(bordered(Eigen::Matrix2d::Identity(), I)).epsilon(1e-8));
  CHECK(isoenergetic_det(fm, I) == doctest::Approx(-1.25).epsilon(1e-8));

  const FrequencyMap lin = FrequencyMap::build(
      [](const Eigen::Vector2d& J) { return 0.5 * J[0] * J[0] + J[1]; }, {}, linspace(-1, 1, 21), linspace(-1, 1, 21));
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  A(0, 0) = 1.0;
  CHECK(isoenergetic_det(lin, {0.3, 0.2}) == doctest::Approx(bordered(A, {0.3, 1.0})).epsilon(1e-8));
  CHECK(isoenergetic_det(lin, {0.3, 0.2}) == doctest::Approx(-1.0).epsilon(1e-8));

  const FrequencyMap iso = FrequencyMap::build([](const Eigen::Vector2d& J) { return J[0] + 1.5 * J[1]; }, {},
                                               linspace(-1, 1, 21), linspace(-1, 1, 21));
  CHECK(std::abs(isoenergetic_det(iso, {0.0, 0.0})) <= 1e-8);
}

TEST_CASE("rotation profile of the circle") {
  const RotationProfile p = rotation_profile(quadratic_map(), 0.5, {0.0, 1.0}, 0.2, 33);
  for (std::size_t i = 0; i < p.mu.size(); ++i) {
    CHECK(p.f[i] == doctest::Approx(std::sqrt(1.0 - p.mu[i] * p.mu[i]) - 1.0).epsilon(1e-10));
    CHECK(p.fprime[i] == doctest::Approx(-p.mu[i] / std::sqrt(1.0 - p.mu[i] * p.mu[i])).epsilon(1e-8));
  }
  CHECK(p.f[16] == 0.0);
  CHECK(p.fsecond_at_0 == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(p.derivative_defect <= 1e-8);
  CHECK(p.nondegenerate);
}

TEST_CASE("rotation profile of an explicit graph") {
  const FrequencyMap fm = FrequencyMap::build([](const Eigen::Vector2d& I) { return I[1] + I[0] * I[0]; }, {},
                                              linspace(-1, 1, 21), linspace(-1, 1, 21));
  const RotationProfile p = rotation_profile(fm, 0.0, {0.0, 0.0}, 0.2, 17);
  for (std::size_t i = 0; i < p.mu.size(); ++i) CHECK(p.f[i] == doctest::Approx(-p.mu[i] * p.mu[i]).epsilon(1e-9));
  CHECK(p.fsecond_at_0 == doctest::Approx(-2.0).epsilon(1e-8));
  // f'(0) = -omega_1 / omega_2 at the center
  CHECK(std::abs(p.fprime[8]) <= 1e-8);
}

TEST_CASE("vanishing omega_2 at the center") {
  CHECK_THROWS_WITH_AS(rotation_profile(quadratic_map(), 0.5, {1.0, 0.0}), doctest::Contains("ImplicitSolveFailed"),
                       Error);
}

TEST_CASE("mask against a direct scan") {
  std::vector<double> mu = linspace(0.0, 1.0, 1001);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  mu.insert(std::upper_bound(mu.begin(), mu.end(), golden), golden);
  DiophantineParams dp;
  dp.dio_c = 0.01;
  dp.q_max = 50;
  const KamMask m = kam_mask(linear_profile(mu), dp);

  auto scan = [&](double w) {
    for (int q = 1; q <= 50; ++q)
      for (int p = 0; p <= q; ++p)
        if (std::abs(w - double(p) / q) < 0.01 / std::pow(q, 2.5)) return false;
    return true;
  };
  for (std::size_t i = 0; i < mu.size(); ++i) CHECK(bool(m.accepted[i]) == scan(mu[i]));
  const auto g = std::size_t(std::find(mu.begin(), mu.end(), golden) - mu.begin());
  CHECK(m.accepted[g]);
  CHECK_FALSE(m.accepted[500]);  // mu = 1/2
}

TEST_CASE("mask limits and monotonicity") {
  // shifted off the exactly rational nodes 0 and +-0.2
  std::vector<double> mu = chebyshev_nodes(0.2, 65);
  for (double& m : mu) m += std::sqrt(2.0) * 1e-3;
  DiophantineParams dp;
  dp.dio_c = 1e-12;
  const KamMask tiny = kam_mask(linear_profile(mu), dp);
  CHECK(tiny.accepted_fraction() == doctest::Approx(1.0).epsilon(1e-15));
  REQUIRE(tiny.complement_measure);
  CHECK(*tiny.complement_measure <= 1e-9);

  KamMask prev;
  for (double c : {0.0025, 0.005, 0.01, 0.02}) {
    dp.dio_c = c;
    const KamMask m = kam_mask(linear_profile(mu), dp);
    if (!prev.accepted.empty())
      for (std::size_t i = 0; i < mu.size(); ++i)
        if (m.accepted[i]) CHECK(prev.accepted[i]);
    prev = m;
  }
}

TEST_CASE("complement measure against grid counting") {
  // Strips narrower than the node spacing are over- or under-counted by a
  // grid, so the count converges to the measure only as the grid is refined.
  for (double c : {0.005, 0.02}) {
    DiophantineParams dp;
    dp.dio_c = c;
    const std::vector<double> coarse = linspace(-0.2 + std::sqrt(2.0) * 1e-4, 0.2, 801);
    const double exact = *kam_mask(linear_profile(coarse), dp).complement_measure;
    const KamMask fine = kam_mask(linear_profile(linspace(-0.2 + std::sqrt(2.0) * 1e-4, 0.2, 80001)), dp);
    CHECK(*fine.complement_measure == doctest::Approx(exact).epsilon(1e-12));
    CHECK((1.0 - fine.accepted_fraction()) * fine.span() == doctest::Approx(exact).epsilon(0.01));
  }
}

TEST_CASE("complement measure is linear in dio_c") {
  const RotationProfile prof = linear_profile(chebyshev_nodes(0.2, 33));
  std::vector<double> ratio;
  for (double c : {0.02, 0.01, 0.005, 0.0025}) {
    DiophantineParams dp;
    dp.dio_c = c;
    ratio.push_back(*kam_mask(prof, dp, true).complement_measure / c);
  }
  const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
  CHECK(*hi <= 3.0 * *lo);
  // at most (L q + 1) strips of width 2 c q^-sigma for each q, L = 0.4 the f' range
  double ends = 0.0;
  for (int q = 1; q <= 200; ++q) ends += 2.0 * std::pow(q, -2.5);
  CHECK(*hi <= 0.4 * resonance_constant(2.5, 200) + ends);
}

TEST_CASE("complement measure is stable under grid refinement") {
  DiophantineParams dp;
  dp.dio_c = 0.01;
  const double a = *kam_mask(linear_profile(chebyshev_nodes(0.2, 33)), dp).complement_measure;
  const double b = *kam_mask(linear_profile(chebyshev_nodes(0.2, 65)), dp).complement_measure;
  CHECK(std::abs(a - b) <= 0.05 * a);
}

TEST_CASE("non-monotone profiles") {
  std::vector<double> mu = linspace(-0.2, 0.2, 21), fp;
  for (double m : mu) fp.push_back(m * m);
  const RotationProfile p = RotationProfile::from_fprime(mu, fp);
  DiophantineParams dp;
  const KamMask m = kam_mask(p, dp);
  CHECK(m.status == MaskStatus::ProfileNotMonotone);
  CHECK_FALSE(m.complement_measure);
  CHECK_THROWS_WITH_AS(kam_mask(p, dp, true), doctest::Contains("ProfileNotMonotone"), Error);
}

TEST_CASE("stable dimension estimate") {
  DiophantineParams dp;
  dp.dio_c = 1e-12;
  const double shift = std::sqrt(2.0) / 100.0;
  const KamMask full = kam_mask(linear_profile(linspace(0.3 + shift, 0.5 + shift, 11)), dp);
  REQUIRE(full.accepted_fraction() == 1.0);
  CHECK(stable_dimension_estimate(full, 0.01, 0.5) == doctest::Approx(std::pow(0.01, -1.5) * 0.2));
  CHECK(stable_dimension_estimate(full, 0.005, 0.5) / stable_dimension_estimate(full, 0.01, 0.5) ==
        doctest::Approx(std::pow(2.0, 1.5)));
  KamMask empty;
  CHECK(stable_dimension_estimate(empty, 0.01, 0.5) == 0.0);
}

TEST_CASE("parameter validation") {
  DiophantineParams dp;
  dp.sigma = 1.0;
  CHECK_THROWS_AS(dp.validate(), Error);
  dp = {};
  dp.q_max = 4;
  CHECK_THROWS_AS(dp.validate(), Error);
}
