#include "mjsc/spectra.hpp"

#include <doctest.h>

#include <algorithm>

using namespace mjsc;

namespace {

FourierTaylorSeries act(int j) { return FourierTaylorSeries::action(2, 2, 2, j); }

FourierTaylorSeries laplacian_series() { return multiply(act(0), act(0)) + multiply(act(1), act(1)); }

SymbolField laplacian() { return SymbolField::from_series(laplacian_series(), "laplacian"); }

// |xi|^2 + lambda (e^{i x1} + e^{-i x1}) + lambda (e^{i x2} + e^{-i x2})
SymbolField banded(double lambda) {
  return SymbolField::from_series(laplacian_series() + FourierTaylorSeries::cosine(2, 2, 2, {1, 0}, {0, 0}, 2 * lambda) +
                                      FourierTaylorSeries::cosine(2, 2, 2, {0, 1}, {0, 0}, 2 * lambda),
                                  "banded");
}

std::vector<double> lattice_levels(double h, double lo, double hi, int reach) {
  std::vector<double> out;
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b) {
      const double e = h * h * (a * a + b * b);
      if (e >= lo && e <= hi) out.push_back(e);
    }
  std::sort(out.begin(), out.end());
  return out;
}

SpectralWindow<double> single_state_window(const ModeLattice& lat, double h, const Eigen::VectorXd& u) {
  SpectralWindow<double> win;
  win.h = h;
  win.delta = 0.5;
  win.lattice = lat;
  win.eigenvalues = Eigen::VectorXd::Zero(1);
  win.eigenvectors = u.normalized();
  return win;
}

}  // namespace

TEST_CASE("mode lattice indexing") {
  const ModeLattice lat{2, 3};
  CHECK(lat.size() == 49);
  for (Eigen::Index i = 0; i < lat.size(); ++i) CHECK(lat.index(lat.mode(i)) == i);
  CHECK(lat.on_boundary(lat.index({3, 0})));
  CHECK_FALSE(lat.on_boundary(lat.index({2, -2})));
  const ModeLattice one{1, 4};
  CHECK(one.size() == 9);
  CHECK(one.mode(0)[0] == -4);
}

TEST_CASE("Weyl matrix entries") {
  const double h = 0.1;
  const WeylMatrix<double> L = weyl_matrix<double>(laplacian(), h, 5);
  const Eigen::MatrixXd off = L.entries - Eigen::MatrixXd(L.entries.diagonal().asDiagonal());
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < L.size(); ++i) {
    const auto n = L.lattice.mode(i);
    CHECK(L.entries(i, i) == doctest::Approx(h * h * (n[0] * n[0] + n[1] * n[1])).epsilon(1e-14));
  }

  const SymbolField c = SymbolField::from_series(FourierTaylorSeries::cosine(2, 2, 2, {1, 0}, {0, 0}, 2.0), "2cos");
  const WeylMatrix<double> C = weyl_matrix<double>(c, h, 4);
  for (Eigen::Index i = 0; i < C.size(); ++i)
    for (Eigen::Index j = 0; j < C.size(); ++j) {
      const auto m = C.lattice.mode(i), n = C.lattice.mode(j);
      const bool shift = std::abs(m[0] - n[0]) == 1 && m[1] == n[1];
      CHECK(C.entries(i, j) == doctest::Approx(shift ? 1.0 : 0.0));
    }

  // xi1 cos x1: entry(n + e1, n) = xi1 / 2 at the midpoint h (n1 + 1/2)
  const SymbolField xc = SymbolField::from_series(FourierTaylorSeries::cosine(2, 2, 2, {1, 0}, {1, 0}, 1.0), "xi1cos");
  const WeylMatrix<std::complex<double>> X = weyl_matrix<std::complex<double>>(xc, h, 4);
  for (int a = -4; a < 4; ++a) {
    const std::array<int, 2> n{a, 1}, m{a + 1, 1};
    CHECK(std::abs(X.entries(X.lattice.index(m), X.lattice.index(n)) - 0.5 * h * (a + 0.5)) <= 1e-14);
    CHECK(std::abs(X.entries(X.lattice.index(n), X.lattice.index(m)) - 0.5 * h * (a + 0.5)) <= 1e-14);
  }
  CHECK(X.hermiticity_defect() <= 1e-15);
}

TEST_CASE("Laplacian window against the lattice") {
  const double h = 0.1, E = 1.0, delta = 0.5;
  const SpectralWindow<double> win = solve_window(weyl_matrix<double>(laplacian(), h, 16), E, delta);
  const std::vector<double> want = lattice_levels(h, win.lo(), win.hi(), 40);
  REQUIRE(win.J_size() == Eigen::Index(want.size()));
  for (std::size_t j = 0; j < want.size(); ++j)
    CHECK(win.eigenvalues[Eigen::Index(j)] == doctest::Approx(want[j]).epsilon(1e-12));
  CHECK(win.truncation_report <= 1e-20);

  const PairingReport pr = pairing_report(win);
  // every nonzero level of |n|^2 has the partner -n
  CHECK(pr.paired_fraction_b == 1.0);
  CHECK(pr.mean_spacing == doctest::Approx(2 * std::sqrt(h) / double(want.size())));
}

TEST_CASE("empty and sparse windows") {
  const SpectralWindow<double> win = solve_window(weyl_matrix<double>(laplacian(), 0.1, 6), -5.0, 0.5);
  CHECK(win.J_size() == 0);
  CHECK_THROWS_WITH_AS(pairing_report(win), doctest::Contains("WindowTooSparse"), Error);
  CHECK(paired_fraction({}, 1.0) == 0.0);
  CHECK(paired_fraction({0.1, 0.3, 0.05, 1.0}, 0.2) == 0.5);
  CHECK_THROWS_AS(solve_window(weyl_matrix<double>(laplacian(), 0.1, 6), 1.0, 1.5), Error);
}

TEST_CASE("eigenpairs of a banded symbol") {
  const double h = 0.1;
  WeylMatrix<double> W;
  WindowRetry retry;
  retry.n_max_start = 16;
  retry.n_max_cap = 24;
  const SpectralWindow<double> win = solve_window<double>(banded(0.05), h, 1.0, 0.5, retry, &W);
  CHECK(W.hermiticity_defect() == 0.0);
  CHECK(eigen_residual(W, win) <= 1e-10);
  CHECK(win.truncation_report <= 1e-8);

  // a larger truncation reproduces the window
  const SpectralWindow<double> big = solve_window(weyl_matrix<double>(banded(0.05), h, 24), 1.0, 0.5);
  REQUIRE(big.J_size() == win.J_size());
  CHECK((big.eigenvalues - win.eigenvalues).cwiseAbs().maxCoeff() <= 1e-10);

  const WeylMatrix<std::complex<double>> Wc = weyl_matrix<std::complex<double>>(banded(0.05), h, W.lattice.n_max);
  const SpectralWindow<std::complex<double>> wc = solve_window(Wc, 1.0, 0.5);
  REQUIRE(wc.J_size() == win.J_size());
  CHECK((wc.eigenvalues - win.eigenvalues).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("truncation failure is reported") {
  WindowRetry retry;
  // |n|^2 = 72 lies in the window and sits on the boundary of n_max = 6
  retry.n_max_start = 6;
  retry.n_max_cap = 6;
  CHECK_THROWS_WITH_AS(solve_window<double>(laplacian(), 0.1, 1.0, 0.5, retry), doctest::Contains("TruncationInsufficient"),
                       Error);
}

TEST_CASE("Husimi masses of plane waves") {
  const double h = 0.1;
  const ModeLattice lat{2, 16};
  const RegionPartition halves = angular_sectors(2, -kPi / 2);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lat.size());
  u[lat.index({10, 0})] = 1.0;
  const HusimiReport one = husimi_masses(single_state_window(lat, h, u), halves);
  CHECK(one.masses[0][0] >= 0.95);
  CHECK(one.dominant[0] == 0);
  CHECK(one.totals[0] == doctest::Approx(1.0).epsilon(0.02));

  u[lat.index({-10, 0})] = 1.0;
  const HusimiReport two = husimi_masses(single_state_window(lat, h, u), halves);
  CHECK(two.masses[0][0] == doctest::Approx(0.5).epsilon(0.02));
  CHECK(two.masses[0][1] == doctest::Approx(0.5).epsilon(0.02));

  const HusimiReport four = husimi_masses(single_state_window(lat, h, u), torus_partition(0.3, 1.2));
  double total = 0.0;
  for (double m : four.masses[0]) total += m;
  CHECK(total == doctest::Approx(1.0).epsilon(0.02));
  CHECK(four.masses[0][0] == doctest::Approx(four.masses[0][1]).epsilon(1e-10));

  HusimiGrid coarse;
  coarse.centers_per_cell = 1.0;
  CHECK_THROWS_WITH_AS(husimi_masses(single_state_window(lat, h, u), halves, coarse), doctest::Contains("GridTooCoarse"),
                       Error);
  CHECK_THROWS_AS(torus_partition(1.0, 0.5), Error);
}

TEST_CASE("Husimi density of a plane wave peaks at its momentum") {
  const double h = 0.1;
  const ModeLattice lat{2, 16};
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lat.size());
  u[lat.index({5, -3})] = 1.0;
  const std::array<double, 2> x{0.4, 1.0}, at{0.5, -0.3}, off{0.5, 0.3};
  CHECK(husimi_density(lat, h, u, x, at) > 10.0 * husimi_density(lat, h, u, x, off));
}

TEST_CASE("Liouville and window averages") {
  const SymbolField one = SymbolField::from_series(FourierTaylorSeries::constant(2, 2, 2, 1.0), "one");
  const SymbolField xi1sq = SymbolField::from_series(multiply(act(0), act(0)), "xi1sq");
  CHECK(liouville_average(laplacian(), one, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  // on the circle |xi| = 1 the mean of cos^2 is 1/2
  CHECK(liouville_average(laplacian(), xi1sq, 1.0) == doctest::Approx(0.5).epsilon(1e-10));

  const SpectralWindow<double> win = solve_window(weyl_matrix<double>(laplacian(), 0.1, 16), 1.0, 0.5);
  const ObservableAverage a = observable_average(win, one, laplacian());
  CHECK(a.window_mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.gap <= 1e-12);
  const ObservableAverage b = observable_average(win, xi1sq, laplacian());
  CHECK(b.window_mean == doctest::Approx(0.5 * win.eigenvalues.mean()).epsilon(1e-10));
}

TEST_CASE("smooth step and cutoff") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.0) == doctest::Approx(0.5));
  for (double e = -1.0; e < 1.0; e += 0.01) CHECK(smooth_step(e) <= smooth_step(e + 0.01));
  CHECK(smooth_cutoff(1.5) == 1.0);
  CHECK(smooth_cutoff(3.5) == 0.0);
  double scan = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const double e = -1.0 + (i + 0.5) / 2000.0;
    scan = std::max(scan, (smooth_step(e + 2.5e-4) - smooth_step(e - 2.5e-4)) / 5e-4);
  }
  CHECK(sup_smooth_step_derivative() == doctest::Approx(scan).epsilon(1e-3));
}

TEST_CASE("quasi-projector") {
  const double h = 0.05, delta = 0.5;
  const ModeLattice lat{2, 30};
  const QuasiProjector Q = QuasiProjector::build(lat, h, 0.0, delta);
  const std::vector<Eigen::Index> tr = Q.transition_modes();
  for (Eigen::Index i = 0; i < lat.size(); ++i) {
    const auto n = lat.mode(i);
    const bool strip = std::abs(h * n[0]) < std::pow(h, delta);
    const bool annulus = h * std::hypot(double(n[0]), double(n[1])) > 2.0;
    if (!strip && !annulus) CHECK(Q.diag[i] * Q.diag[i] == Q.diag[i]);
    if (std::find(tr.begin(), tr.end(), i) != tr.end()) CHECK((strip || annulus));
  }

  // diagonal symbol: exact commutation
  const WeylMatrix<double> L = weyl_matrix<double>(laplacian(), h, 30);
  const SpectralWindow<double> win = solve_window(L, 1.0, delta);
  CHECK(commutator_norm(Q, L, win) == 0.0);

  const WeylMatrix<double> B = weyl_matrix<double>(banded(0.05), h, 30);
  const SpectralWindow<double> wb = solve_window(B, 1.0, delta);
  const double c = commutator_norm(Q, B, wb);
  CHECK(c > 0.0);
  CHECK(c <= band_commutator_bound(0.05, h, delta));
}

TEST_CASE("Gram-Schmidt skips states on one side of the strip") {
  const double h = 0.1;
  const ModeLattice lat{2, 16};
  const WeylMatrix<double> L = weyl_matrix<double>(laplacian(), h, 16);
  const QuasiProjector Q = QuasiProjector::build(lat, h, 0.0, 0.5);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(lat.size());
  u[lat.index({9, 2})] = 1.0;
  PairingReport rep;
  gram_schmidt_pairs(single_state_window(lat, h, u), L, Q, rep);
  CHECK(rep.skipped_mass_floor == 1);
  CHECK(rep.gram_schmidt.empty());

  // symmetric combination: both halves carry mass 1/sqrt(2) and stay eigenvectors
  u[lat.index({-9, 2})] = 1.0;
  SpectralWindow<double> win = single_state_window(lat, h, u);
  win.eigenvalues[0] = h * h * 85;
  gram_schmidt_pairs(win, L, Q, rep);
  REQUIRE(rep.gram_schmidt.size() == 1);
  CHECK(rep.gram_schmidt[0].norm_v == doctest::Approx(std::sqrt(0.5)));
  CHECK(rep.gram_schmidt[0].residual_v <= 1e-14);
  CHECK(rep.gram_schmidt[0].residual_w <= 1e-14);
  CHECK(rep.gram_schmidt[0].overlap <= 1e-14);
}

TEST_CASE("one-dimensional solver") {
  const SymbolField free = SymbolField::from_series(
      multiply(FourierTaylorSeries::action(1, 2, 2, 0), FourierTaylorSeries::action(1, 2, 2, 0)) * 0.5, "free");
  const double h = 0.1;
  const Eigen::VectorXd ev = solve_1d(free, h, 10);
  REQUIRE(ev.size() == 21);
  CHECK(ev[0] == doctest::Approx(0.0));
  for (int k = 1; k <= 10; ++k) {
    CHECK(ev[2 * k - 1] == doctest::Approx(0.5 * h * h * k * k).epsilon(1e-12));
    CHECK(ev[2 * k] == doctest::Approx(0.5 * h * h * k * k).epsilon(1e-12));
  }
}

TEST_CASE("dense eigensolver") {
  Eigen::MatrixXd A = Eigen::MatrixXd::Random(30, 30);
  A = (A + A.transpose()).eval();
  const auto dec = hermitian_eigensolve<double>(A);
  CHECK((A * dec.vectors - dec.vectors * dec.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-12);
  for (Eigen::Index i = 1; i < dec.values.size(); ++i) CHECK(dec.values[i - 1] <= dec.values[i]);
}
