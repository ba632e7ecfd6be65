// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "mjsc/bnf.hpp"
#include "mjsc/cli.hpp"
#include "mjsc/flow.hpp"
#include "mjsc/kam.hpp"
#include "mjsc/models.hpp"
#include "mjsc/quantize.hpp"
#include "mjsc/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>

using namespace mjsc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("threw ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool nonincreasing(const std::vector<double>& v, double floor = 0.0) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > floor) return false;
  return true;
}

MjPair criterion_pair(double a2) {
  TrigPolynomial V;
  V.dim = 2;
  V.terms = {{{1, 0}, 0.1, 0.0}, {{0, 1}, a2, 0.0}};
  return build_mechanical_pair(CoMetric::identity(), V, 1.0);
}

Outcome orbit_coincidence() {
  const MjPair pair = criterion_pair(0.05);
  double dist = 0.0, werr = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const OrbitCheck c = mj_orbit_check(pair, 1000 + s);
    dist = std::max(dist, c.orbit_distance);
    werr = std::max(werr, c.omega_rel_error);
  }
  return {dist <= 1e-5 && werr <= 1e-4,
          fmt("10 seeds, max orbit distance %.2e (<= 1e-5), max frequency error %.2e (<= 1e-4)", dist, werr)};
}

Outcome kam_measure() {
  const std::vector<double> mu = chebyshev_nodes(0.2, 33);
  const RotationProfile prof = RotationProfile::from_fprime(mu, mu);
  std::vector<double> ratios;
  for (double c : {0.02, 0.01, 0.005, 0.0025}) {
    DiophantineParams p;
    p.sigma = 2.5;
    p.dio_c = c;
    ratios.push_back(*kam_mask(prof, p, true).complement_measure / c);
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  return {*lo > 0.0 && *hi <= 3.0 * *lo,
          fmt("measure/c in [%.4f, %.4f], spread %.3f (<= 3)", *lo, *hi, *hi / *lo)};
}

Outcome bnf_order() {
  const FourierTaylorSeries H = standard_bnf_series();
  const std::array<double, 2> w = golden_frequencies();
  const std::vector<double> radii{0.08, 0.056, 0.04, 0.028, 0.02};
  bool ok = true;
  std::string slopes;
  double cross = 0.0;
  for (int N : {1, 2, 3}) {
    const BnfResult r = bnf_normalize(H, w, N);
    const ProbeResult pr = remainder_order_probe(r, H, radii);
    ok = ok && (pr.exact || pr.slope >= N + 0.7);
    slopes += fmt("%s%.2f", slopes.empty() ? "" : "/", pr.slope);
    if (N != 3) continue;
    for (const FourierTaylorSeries& g : r.generators) {
      if (g.max_abs() == 0.0) continue;
      const FourierTaylorSeries lie = lie_transform(g, H);
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 4; ++j) {
          const double th = kPi * (2 * j + 1) / 4;
          State y(4);
          y << kTwoPi * i / 8, 0.9 * i, 0.05 * std::cos(th), 0.05 * std::sin(th);
          const State z = generator_flow(g, y, 16);
          const double ode = H.eval(std::span<const double>(z.data(), 2), std::span<const double>(z.data() + 2, 2));
          const double ls = lie.eval(std::span<const double>(y.data(), 2), std::span<const double>(y.data() + 2, 2));
          cross = std::max(cross, std::abs(ode - ls));
        }
    }
  }
  return {ok && cross <= 1e-8,
          fmt("slopes %s for N = 1/2/3 (>= N + 0.7), Lie series vs flow %.2e (<= 1e-8)", slopes.c_str(), cross)};
}

Outcome bs_exact() {
  // flat torus: ladder of |iota|^2 against the lattice spectrum of -h^2 Laplacian
  const double h = 0.1, delta = 0.5, E = 1.0;
  const ActionPolynomial flat = [](std::span<const double> i) { return i[0] * i[0] + i[1] * i[1]; };
  LadderOptions opt;
  opt.c_adm = 10.0;
  opt.E = E;
  const QuasiEnergyTable t = bs_energies(flat, 2, {{0, 0}, {0.0, 0.0}}, h, delta, opt);
  std::multiset<long> ladder, exact;
  for (const auto& q : t.entries) ladder.insert(std::lround(q.energy / (h * h)));
  const SymbolField lap = SymbolField::from_series(
      multiply(FourierTaylorSeries::action(2, 1, 2, 0), FourierTaylorSeries::action(2, 1, 2, 0)) +
          multiply(FourierTaylorSeries::action(2, 1, 2, 1), FourierTaylorSeries::action(2, 1, 2, 1)),
      "laplacian");
  const SpectralWindow<double> win = solve_window(weyl_matrix<double>(lap, h, 16), E, delta);
  double snap = 0.0;
  for (Eigen::Index j = 0; j < win.J_size(); ++j) {
    const double n2 = win.eigenvalues[j] / (h * h);
    snap = std::max(snap, std::abs(n2 - std::round(n2)));
    exact.insert(std::lround(n2));
  }
  const bool torus = ladder == exact && snap <= 1e-8;

  // 1-D oscillator in action form with Maslov index 2
  const double h1 = 0.01;
  const ActionPolynomial osc = [](std::span<const double> i) { return i[0]; };
  LadderOptions o1;
  o1.E = 0.05;
  const QuasiEnergyTable t1 = bs_energies(osc, 1, {{2}, {0.0}}, h1, delta, o1);
  double err = 0.0;
  std::set<long> levels;
  for (const auto& q : t1.entries) {
    const double n = q.energy / h1 - 0.5;
    err = std::max(err, std::abs(n - std::round(n)));
    levels.insert(std::lround(n));
  }
  const bool contiguous = !levels.empty() && long(levels.size()) == *levels.rbegin() - *levels.begin() + 1;
  const bool oscillator = !t1.entries.empty() && err <= 1e-9 && contiguous;
  return {torus && oscillator, fmt("flat torus %zu ladder vs %zu eigenvalues %s; oscillator %zu levels h(n + 1/2), "
                                   "max offset %.1e",
                                   ladder.size(), exact.size(), ladder == exact ? "equal" : "differ",
                                   t1.entries.size(), err)};
}

struct SpectralRuns {
  std::vector<double> hs{0.1, 0.07, 0.05};
  std::vector<SpectralStudy> studies;
};

SpectralRuns run_spectral() {
  SpectralRuns runs;
  const MjPair pair = criterion_pair(0.1);
  SpectralStudyOptions opt;
  opt.E = 1.0;
  opt.delta = 0.5;
  opt.lambda = 0.05;
  for (double h : runs.hs) runs.studies.push_back(spectral_study(pair.H, h, opt));
  return runs;
}

Outcome pairing_trend(const SpectralRuns& s) {
  std::vector<double> fa;
  bool gs = true;
  std::string detail;
  for (std::size_t i = 0; i < s.hs.size(); ++i) {
    const SpectralStudy& st = s.studies[i];
    fa.push_back(st.pairing->paired_fraction_a);
    const double bound = 10.0 * 0.05 * s.hs[i];
    gs = gs && st.gs_max_residual <= bound;
    detail += fmt("h=%.2f J=%ld paired %.3f GS %.2e/%.2e; ", s.hs[i], long(st.window.J_size()), fa.back(),
                  st.gs_max_residual, bound);
  }
  const bool trend = std::is_sorted(fa.begin(), fa.end());
  return {trend && fa.back() >= 0.8 && gs, detail + (trend ? "nondecreasing" : "not monotone")};
}

Outcome trace_decay(const SpectralRuns& s) {
  std::vector<double> even, odd;
  for (const SpectralStudy& st : s.studies) {
    even.push_back(st.worst_even_gap());
    odd.push_back(st.worst_odd_mean());
  }
  const bool ok = even.back() <= 0.05 && odd.back() <= 0.05 && nonincreasing(even) && nonincreasing(odd, 1e-12);
  return {ok, fmt("worst trace gap %.2e/%.2e/%.2e, worst odd mean %.1e/%.1e/%.1e", even[0], even[1], even[2], odd[0],
                  odd[1], odd[2])};
}

Outcome larmor_levels() {
  const LarmorReduction red = rational_average(larmor_series(), 3);
  const double k1 = 0.1;
  const LarmorOperator op = larmor_operator(red, k1, true);
  std::vector<double> hs{0.02, 0.01, 0.005}, errs;
  bool within = true;
  for (double h : hs) {
    const Eigen::VectorXd ev = solve_1d(op.symbol, h, int(std::ceil(1.2 / h)) + 20);
    const HarmonicLevels hl = larmor_harmonic_levels(red, k1, h, 3);
    double e = 0.0;
    for (int n = 0; n < 3; ++n) e = std::max(e, std::abs(ev[n] - hl.levels[std::size_t(n)]));
    errs.push_back(e);
    if (h == 0.01) within = e <= 5.0 * std::pow(h, 1.5);
  }
  const double order = loglog_slope(hs, errs);
  return {within && order >= 1.4, fmt("errors %.2e/%.2e/%.2e, h = 0.01 bound %.2e, fitted order %.3f (>= 1.4)",
                                      errs[0], errs[1], errs[2], 5.0 * std::pow(0.01, 1.5), order)};
}

Outcome katok() {
  double beta_err = 0.0, pb = 0.0;
  for (double a : {0.0, 0.3}) {
    const KatokModel km = katok_hamiltonian(a);
    for (int b : {1, -1}) {
      const PhasePoint p0(2, {0.0, 0.0}, {km.equator_momentum(b), 1e-4}, 0b01);
      const SectionRotation sr = section_rotation(km.H, p0, 0, 1, 20, 0.01);
      beta_err = std::max(beta_err, std::abs(std::abs(sr.advance) - katok_beta(a, b)));
    }
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) {
        const PhasePoint q = km.H.point({kTwoPi * i / 64, km.band * (2.0 * j / 63 - 1)},
                                        {std::cos(0.1 * i + j), std::sin(0.37 * i - j)});
        pb = std::max(pb, std::abs(poisson_bracket(km.lambda, km.eta, q)));
      }
  }
  const KatokLadder L = katok_ladder(katok_hamiltonian(0.0), 1, {0, 4}, {0, 4}, 1);
  double ladder = 0.0;
  for (const auto& r : L.entries) ladder = std::max(ladder, std::abs(r.h - kTwoPi / (kTwoPi * (r.m1 + r.m2) + kTwoPi)));
  return {beta_err <= 1e-4 && pb <= 1e-8 && ladder <= 1e-10,
          fmt("beta error %.2e (<= 1e-4), max |{lambda, eta}| %.1e, round-sphere ladder deviation %.1e", beta_err, pb,
              ladder)};
}

Outcome projector(const SpectralRuns& s) {
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < s.hs.size(); ++i) {
    if (s.hs[i] == 0.07) continue;
    const SpectralStudy& st = s.studies[i];
    ok = ok && st.integrable_commutator <= 1e-14 && st.commutator <= 10.0 * st.commutator_bound;
    detail += fmt("h=%.2f integrable %.1e, perturbed %.2e vs 10 x %.2e; ", s.hs[i], st.integrable_commutator,
                  st.commutator, st.commutator_bound);
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

}  // namespace

int main() {
  report("C1", "orbit coincidence", orbit_coincidence);
  report("C2", "KAM complement measure", kam_measure);
  report("C3", "normal form remainder order", bnf_order);
  report("C4", "Bohr-Sommerfeld on exact models", bs_exact);

  SpectralRuns runs;
  std::string spectral_error;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    runs = run_spectral();
  } catch (const std::exception& e) {
    spectral_error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("     spectral windows for C5, C6, C9: %.1f s\n", secs);
  auto shared = [&](Outcome (*f)(const SpectralRuns&)) {
    return [&, f] { return spectral_error.empty() ? f(runs) : Outcome{false, "threw " + spectral_error}; };
  };
  report("C5", "pairing trend", shared(pairing_trend));
  report("C6", "trace averages and odd decay", shared(trace_decay));
  report("C7", "Larmor well levels", larmor_levels);
  report("C8", "Katok ladder", katok);
  report("C9", "quasi-projector commutator", shared(projector));
  return failures == 0 ? 0 : 1;
}
