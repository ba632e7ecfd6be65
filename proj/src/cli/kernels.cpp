#include "mjsc/cli.hpp"

#include "mjsc/roots.hpp"

#include <algorithm>
#include <random>

namespace mjsc {

OrbitCheck mj_orbit_check(const MjPair& pair, std::uint64_t seed, double t_end, double dt, int stride) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::optional<PhasePoint> p0;
  for (int attempt = 0; attempt < 100 && !p0; ++attempt) {
    std::array<double, 2> x{pair.H.x_lo[0] + (pair.H.x_hi[0] - pair.H.x_lo[0]) * angle(rng) / kTwoPi,
                            pair.H.x_lo[1] + (pair.H.x_hi[1] - pair.H.x_lo[1]) * angle(rng) / kTwoPi};
    p0 = surface_point(pair.H, pair.E, x, angle(rng));
  }
  if (!p0) throw Error(Errc::SurfaceNotFound, "no surface point found for seed " + std::to_string(seed));

  IntegrateOptions opt;
  opt.stride = stride;
  const Trajectory th = integrate(pair.H, *p0, t_end, dt, opt);
  const double t_calH = matched_calH_time(pair, th);
  const Trajectory tc = integrate(pair.calH, *p0, t_calH, dt, opt);

  OrbitCheck out;
  out.seed = seed;
  out.start = *p0;
  out.orbit_distance = orbit_set_distance(tc, th);
  const TimeAverage G = average_reparam(pair, tc, AverageKind::Weighted);
  out.G_average = G.value;
  out.G_convergence = G.convergence;
  out.omega_calH = rotation_number(tc).omega;
  out.omega_H = rotation_number(th).omega;
  double scale = 0.0, err = 0.0;
  for (std::size_t j = 0; j < out.omega_calH.size(); ++j) {
    scale = std::max(scale, std::abs(out.omega_calH[j]));
    err = std::max(err, std::abs(out.omega_calH[j] - G.value * out.omega_H[j]));
  }
  out.omega_rel_error = scale > 0.0 ? err / scale : err;
  out.drift_calH = tc.energy_drift;
  out.drift_H = th.energy_drift;
  return out;
}

namespace {

SymbolField observable(const FourierTaylorSeries& s, std::string name) {
  SymbolField f = SymbolField::from_series(s, std::move(name));
  return f;
}

}  // namespace

std::vector<SymbolField> trace_observables() {
  using F = FourierTaylorSeries;
  return {observable(F::constant(2, 4, 4, 1.0), "one"),
          observable(F::cosine(2, 4, 4, {1, 0}, {0, 0}, 1.0), "cos_x1"),
          observable(F::cosine(2, 4, 4, {0, 0}, {2, 0}, 1.0), "xi1_sq"),
          observable(F::cosine(2, 4, 4, {0, 1}, {2, 0}, 1.0), "xi1_sq_cos_x2"),
          observable(F::cosine(2, 4, 4, {1, 1}, {0, 0}, 1.0), "cos_x1_plus_x2")};
}

std::vector<SymbolField> odd_observables() {
  using F = FourierTaylorSeries;
  return {observable(F::cosine(2, 4, 4, {0, 0}, {1, 0}, 1.0), "xi1"),
          observable(F::cosine(2, 4, 4, {1, 0}, {1, 0}, 1.0), "xi1_cos_x1"),
          observable(F::sine(2, 4, 4, {1, 0}, {0, 1}, 1.0), "xi2_sin_x1")};
}

double SpectralStudy::worst_even_gap() const {
  double w = 0.0;
  for (const auto& a : even) w = std::max(w, a.value.gap);
  return w;
}

double SpectralStudy::worst_odd_mean() const {
  double w = 0.0;
  for (const auto& a : odd) w = std::max(w, std::abs(a.value.window_mean));
  return w;
}

int auto_n_max(const SymbolField& H, double E, double h, double delta) {
  const double top = E + std::pow(h, delta);
  double R = 0.0;
  const int nx = 16, nd = 16;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < (H.dim == 2 ? nx : 1); ++j)
      for (int k = 0; k < (H.dim == 2 ? nd : 2); ++k) {
        const std::array<double, 2> x{kTwoPi * i / nx, kTwoPi * j / nx};
        const double th = H.dim == 2 ? kTwoPi * (k + 0.5) / nd : kPi * k;
        const std::array<double, 2> dir{std::cos(th), H.dim == 2 ? std::sin(th) : 0.0};
        auto f = [&](double r) { return H.eval(H.point(x, {r * dir[0], r * dir[1]})) - top; };
        if (!(f(0.0) < 0.0)) continue;
        const auto r = ray_root(f);
        if (!r) throw Error(Errc::SurfaceNotFound, "symbol does not grow along a momentum ray");
        R = std::max(R, *r);
      }
  return int(std::ceil(R / h)) + 10;
}

SpectralStudy spectral_study(const SymbolField& H, double h, const SpectralStudyOptions& opt) {
  SpectralStudy st;
  st.h = h;
  WindowRetry retry;
  const int wanted = opt.n_max > 0 ? opt.n_max : auto_n_max(H, opt.E, h, opt.delta);
  retry.n_max_cap = opt.n_max_cap;
  retry.n_max_start = std::min(wanted, opt.n_max_cap);
  WeylMatrix<double> W;
  st.window = solve_window<double>(H, h, opt.E, opt.delta, retry, &W);
  st.n_max = W.lattice.n_max;
  st.eigen_residual = eigen_residual(W, st.window);

  if (opt.pairing) st.pairing = pairing_report(st.window, opt.policy);
  if (opt.projector) {
    const QuasiProjector Q = QuasiProjector::build(W.lattice, h, opt.I1, opt.delta);
    st.commutator = commutator_norm(Q, W, st.window);
    st.commutator_bound = band_commutator_bound(opt.lambda, h, opt.delta);
    WeylMatrix<double> D = W;
    D.entries = DenseMatrix<double>(W.entries.diagonal().asDiagonal());
    st.integrable_commutator = commutator_norm(Q, D, st.window);
    if (st.pairing) {
      GramSchmidtOptions gs;
      gs.mass_floor = opt.mass_floor;
      gram_schmidt_pairs(st.window, W, Q, *st.pairing, gs);
      for (const auto& r : st.pairing->gram_schmidt)
        st.gs_max_residual = std::max({st.gs_max_residual, r.residual_v, r.residual_w});
    }
  }
  if (opt.trace) {
    for (const auto& a : trace_observables()) st.even.push_back({a.name, observable_average(st.window, a, H)});
    for (const auto& a : odd_observables()) st.odd.push_back({a.name, observable_average(st.window, a, H)});
  }
  if (opt.partition)
    st.husimi = husimi_masses(st.window, torus_partition(opt.partition->first, opt.partition->second));
  return st;
}

}  // namespace mjsc
