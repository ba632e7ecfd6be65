#include "config_internal.hpp"

#include "mjsc/bnf.hpp"
#include "mjsc/kam.hpp"
#include "mjsc/quantize.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

namespace mjsc {

const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog{
      {"mjc-check", "shared-surface defect and multiplier range of a model pair", {"model"}},
      {"flow", "orbit coincidence and frequency rescaling over random seeds", {"model"}},
      {"kam", "Diophantine mask of a rotation profile over a dio_c sweep", {"params.dio_c"}},
      {"bnf", "Birkhoff normal form and remainder-order probe", {"model", "params.omega"}},
      {"larmor", "rational-torus averaging and low Larmor levels over an h grid",
       {"model", "params.k1", "params.h"}},
      {"bs-ladder", "quasi-energy ladder of an action polynomial",
       {"model", "params.h", "params.delta", "params.alpha", "params.I0"}},
      {"katok", "Katok rotation angles and quantization ladder", {"model", "params.m1", "params.m2"}},
      {"spectrum", "Weyl-quantized eigenvalues in the energy window", {"model", "params.h", "params.delta"}},
      {"pairing", "near-degenerate pair statistics and Gram-Schmidt residuals",
       {"model", "params.h", "params.delta", "params.lambda"}},
      {"trace-test", "window trace averages against Liouville averages", {"model", "params.h", "params.delta"}},
      {"projector", "quasi-projector commutator against the band bound",
       {"model", "params.h", "params.delta", "params.lambda"}},
  };
  return catalog;
}

void print_catalog(std::ostream& os) {
  for (const auto& e : experiment_catalog()) {
    os << e.kind << "  " << e.summary << "\n    requires:";
    for (const auto& r : e.required) os << ' ' << r;
    os << '\n';
  }
}

std::string suggest_kind(std::string_view kind) {
  auto distance = [](std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
      std::size_t diag = row[0];
      row[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        const std::size_t up = row[j];
        row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
        diag = up;
      }
    }
    return row[b.size()];
  };
  std::string best;
  std::size_t best_d = 4;
  for (const auto& e : experiment_catalog()) {
    const std::size_t d = distance(kind, e.kind);
    if (d < best_d) {
      best_d = d;
      best = e.kind;
    }
  }
  return best;
}

namespace cli {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::ConfigInvalid, msg); }

// Joins fields with commas, reals at 17 significant digits.
class CsvRow {
 public:
  CsvRow& operator<<(double v) { return add(csv_real(v)); }
  CsvRow& operator<<(int v) { return add(std::to_string(v)); }
  CsvRow& operator<<(long v) { return add(std::to_string(v)); }
  CsvRow& operator<<(std::uint64_t v) { return add(std::to_string(v)); }
  CsvRow& operator<<(const std::string& v) { return add(v); }
  std::string str() const { return s_ + '\n'; }

 private:
  CsvRow& add(const std::string& v) {
    if (!first_) s_ += ',';
    s_ += v;
    first_ = false;
    return *this;
  }
  std::string s_;
  bool first_ = true;
};

std::string h_tag(std::size_t i) { return "h" + std::to_string(i); }

ModelSpec need_model(std::optional<Section>& model, const std::string& kind) {
  if (!model) invalid("experiment '" + kind + "' needs a model block");
  return parse_model(std::move(*model));
}

MjPair need_pair(const ModelSpec& m, const std::string& kind) {
  if (!m.pair) invalid("experiment '" + kind + "' needs a pair model, got '" + m.kind + "'");
  return *m.pair;
}

FourierTaylorSeries need_series(const ModelSpec& m, const std::string& kind) {
  if (!m.series) invalid("experiment '" + kind + "' needs a custom_fourier model, got '" + m.kind + "'");
  return *m.series;
}

std::vector<double> h_list(Section& p) {
  auto hs = p.reals("h");
  for (double h : hs) positive(h, p.path() + ".h");
  return hs;
}

double window_delta(Section& p) {
  const double delta = p.real("delta");
  if (!(delta > 0.0 && delta < 1.0)) invalid(p.path() + ".delta must lie in (0, 1)");
  return delta;
}

template <class F>
Plan capture(F&& f) {
  return Plan(std::forward<F>(f));
}

// ---------------------------------------------------------------------------

Plan plan_mjc_check(std::optional<Section> model, Section p) {
  const MjPair pair = need_pair(need_model(model, "mjc-check"), "mjc-check");
  const int n_rays = p.integer("n_rays", 8), n_angles = p.integer("n_angles", 16);
  require(n_rays > 0 && n_angles > 0, "params.n_rays and params.n_angles must be > 0");
  const double tol = positive(p.real("tol", 1e-8), "params.tol");
  p.finish();
  return capture([=] {
    const MjcReport rep = mj_consistency_report(pair, n_rays, n_angles);
    RunResult r;
    std::string csv = "model,n_points,max_defect,min_multiplier,max_multiplier,failed_rays\n";
    csv += (CsvRow() << pair.kind << rep.n_points << rep.max_defect << rep.min_multiplier << rep.max_multiplier
                     << int(rep.failed_rays.size()))
               .str();
    r.files.push_back({"mjc.csv", csv});
    r.summary = {{"model", pair.kind}, {"max_defect", rep.max_defect}, {"tol", tol},
                 {"within_tol", rep.max_defect <= tol}};
    r.steps.emplace_back("consistency_report", "ok");
    return r;
  });
}

Plan plan_flow(std::optional<Section> model, Section p, std::uint64_t seed) {
  const MjPair pair = need_pair(need_model(model, "flow"), "flow");
  const int seeds = p.integer("seeds", 10);
  const double t_end = positive(p.real("t_end", 200.0), "params.t_end");
  const double dt = positive(p.real("dt", 0.02), "params.dt");
  const int stride = p.integer("stride", 5);
  require(seeds > 0 && stride > 0, "params.seeds and params.stride must be > 0");
  p.finish();
  return capture([=] {
    RunResult r;
    std::string csv =
        "seed,x1,x2,xi1,xi2,orbit_distance,G_average,G_convergence,omega_calH_1,omega_calH_2,omega_H_1,omega_H_2,"
        "omega_rel_error,drift_calH,drift_H\n";
    double worst_d = 0.0, worst_w = 0.0;
    for (int i = 0; i < seeds; ++i) {
      const OrbitCheck c = mj_orbit_check(pair, seed + std::uint64_t(i), t_end, dt, stride);
      CsvRow row;
      row << c.seed << c.start.x[0] << c.start.x[1] << c.start.xi[0] << c.start.xi[1] << c.orbit_distance
          << c.G_average << c.G_convergence;
      for (int j = 0; j < 2; ++j) row << (j < int(c.omega_calH.size()) ? c.omega_calH[std::size_t(j)] : 0.0);
      for (int j = 0; j < 2; ++j) row << (j < int(c.omega_H.size()) ? c.omega_H[std::size_t(j)] : 0.0);
      row << c.omega_rel_error << c.drift_calH << c.drift_H;
      csv += row.str();
      worst_d = std::max(worst_d, c.orbit_distance);
      worst_w = std::max(worst_w, c.omega_rel_error);
      r.steps.emplace_back("seed " + std::to_string(c.seed), "ok");
    }
    r.files.push_back({"flow.csv", csv});
    r.summary = {{"seeds", seeds}, {"max_orbit_distance", worst_d}, {"max_omega_rel_error", worst_w}};
    return r;
  });
}

Plan plan_kam(std::optional<Section> model, Section p) {
  const std::string profile = p.text("profile", "linear");
  const double half_width = positive(p.real("half_width", 0.2), "params.half_width");
  const int nodes = p.integer("nodes", 33);
  require(nodes >= 3 && nodes % 2 == 1, "params.nodes must be odd and >= 3");
  std::function<RotationProfile()> make_profile;
  if (profile == "linear") {
    if (model) invalid("kam with profile 'linear' takes no model block");
    const double slope = p.real("slope", 1.0), offset = p.real("offset", 0.0);
    make_profile = [=] {
      auto mu = chebyshev_nodes(half_width, nodes);
      std::vector<double> fp;
      for (double m : mu) fp.push_back(offset + slope * m);
      return RotationProfile::from_fprime(mu, fp);
    };
  } else if (profile == "model") {
    const FourierTaylorSeries s = need_series(need_model(model, "kam"), "kam");
    if (s.dim() != 2 || !s.angle_dependent().empty()) invalid("kam model must be an angle-free 2-D series");
    const auto c = p.real_pair("center");
    const double calE = p.real("energy");
    make_profile = [=] {
      const ActionPolynomial P = as_action_polynomial(s);
      auto H = [P](const Eigen::Vector2d& I) { return P(std::span<const double>(I.data(), 2)); };
      const double r = 2.0 * half_width + 0.5;
      const FrequencyMap fm =
          FrequencyMap::build(H, {}, linspace(c[0] - r, c[0] + r, 21), linspace(c[1] - r, c[1] + r, 21));
      return rotation_profile(fm, calE, {c[0], c[1]}, half_width, nodes);
    };
  } else {
    invalid("params.profile must be 'linear' or 'model'");
  }
  DiophantineParams base;
  base.sigma = p.real("sigma", 2.5);
  base.q_max = p.integer("q_max", 200);
  const auto dio_cs = p.reals("dio_c");
  const std::optional<double> h = p.has("h") ? std::optional(p.real("h")) : std::nullopt;
  const double delta = p.real("delta", 0.5);
  p.finish();
  for (double c : dio_cs) {
    DiophantineParams q = base;
    q.dio_c = c;
    try {
      q.validate();
    } catch (const Error& e) {
      invalid(std::string("params: ") + e.what());
    }
  }
  return capture([=] {
    RunResult r;
    const RotationProfile prof = make_profile();
    r.steps.emplace_back("rotation_profile", "ok");
    std::string trend = "dio_c,complement_measure,ratio,accepted_fraction,stable_estimate\n";
    json rows = json::array();
    for (std::size_t i = 0; i < dio_cs.size(); ++i) {
      DiophantineParams q = base;
      q.dio_c = dio_cs[i];
      const KamMask m = kam_mask(prof, q);
      std::ostringstream mask;
      write_mask_csv(mask, m);
      r.files.push_back({"mask_c" + std::to_string(i) + ".csv", mask.str()});
      const double meas = m.complement_measure.value_or(std::nan(""));
      const double est = h ? stable_dimension_estimate(m, *h, delta) : std::nan("");
      trend += (CsvRow() << q.dio_c << meas << meas / q.dio_c << m.accepted_fraction() << est).str();
      rows.push_back({{"dio_c", q.dio_c}, {"ratio", meas / q.dio_c}});
    }
    r.files.push_back({"kam_trend.csv", trend});
    r.summary = {{"profile", profile}, {"sigma", base.sigma}, {"ratios", rows}};
    if (!prof.f.empty()) {
      r.summary["fsecond_at_0"] = prof.fsecond_at_0;
      r.summary["nondegenerate"] = prof.nondegenerate;
    }
    return r;
  });
}

Plan plan_bnf(std::optional<Section> model, Section p) {
  const FourierTaylorSeries H = need_series(need_model(model, "bnf"), "bnf");
  const auto omega = p.reals("omega");
  require(int(omega.size()) == H.dim(), "params.omega needs one entry per dimension");
  const auto Ns = p.integers("N", {1, 2, 3});
  for (int N : Ns) require(N >= 1, "params.N must be >= 1");
  const auto radii = p.reals("radii", {0.08, 0.056, 0.04, 0.028, 0.02});
  for (double rr : radii) positive(rr, "params.radii");
  BnfOptions opt;
  opt.dio_guard = p.real("dio_guard", 1e-8);
  p.finish();
  return capture([=] {
    RunResult r;
    std::string probe = "N,radius,residual\n";
    json slopes = json::array();
    for (int N : Ns) {
      const BnfResult b = bnf_normalize(H, omega, N, opt);
      std::ostringstream nf;
      write_normal_form_csv(nf, b);
      r.files.push_back({"normal_form_N" + std::to_string(N) + ".csv", nf.str()});
      const ProbeResult pr = remainder_order_probe(b, H, radii);
      for (std::size_t i = 0; i < pr.radii.size(); ++i) probe += (CsvRow() << N << pr.radii[i] << pr.residuals[i]).str();
      slopes.push_back({{"N", N}, {"slope", pr.exact ? json("exact") : json(pr.slope)}});
      r.steps.emplace_back("N=" + std::to_string(N), "ok");
    }
    r.files.push_back({"probe.csv", probe});
    r.summary = {{"slopes", slopes}};
    return r;
  });
}

Plan plan_larmor(std::optional<Section> model, Section p) {
  const FourierTaylorSeries H = need_series(need_model(model, "larmor"), "larmor");
  require(H.dim() == 2, "larmor needs a 2-D series");
  const int N = p.integer("N", 3);
  const double k1 = p.real("k1");
  const auto hs = h_list(p);
  const int levels = p.integer("levels", 3);
  const double scale = positive(p.real("n_max_scale", 1.2), "params.n_max_scale");
  const bool quadratic = p.flag("quadratic_model", true);
  require(N >= 1 && levels >= 1, "params.N and params.levels must be >= 1");
  p.finish();
  return capture([=] {
    RunResult r;
    const LarmorReduction red = rational_average(H, N);
    const LarmorOperator op = larmor_operator(red, k1, quadratic);
    r.steps.emplace_back("rational_average", "ok");
    std::string csv = "h,n,numeric,harmonic,error\n";
    std::vector<double> errs;
    for (double h : hs) {
      const int n_max = int(std::ceil(scale / h)) + 20;
      const Eigen::VectorXd ev = solve_1d(op.symbol, h, n_max);
      const HarmonicLevels hl = larmor_harmonic_levels(red, k1, h, levels);
      double e = 0.0;
      for (int n = 0; n < levels && n < ev.size(); ++n) {
        const double err = std::abs(ev[n] - hl.levels[std::size_t(n)]);
        e = std::max(e, err);
        csv += (CsvRow() << h << n << ev[n] << hl.levels[std::size_t(n)] << err).str();
      }
      errs.push_back(e);
    }
    r.files.push_back({"larmor_levels.csv", csv});
    const CriticalReport cr = critical_set_classify(red);
    std::string crit = "x2,omega1,omega1_second,kind\n";
    for (const auto& c : cr.points)
      crit += (CsvRow() << c.x2 << c.omega1 << c.omega1_second
                        << std::string(c.kind == CriticalPoint::Kind::Minimum   ? "minimum"
                                       : c.kind == CriticalPoint::Kind::Maximum ? "maximum"
                                                                                : "degenerate"))
                  .str();
    r.files.push_back({"critical_set.csv", crit});
    r.summary = {{"regime", op.regime}, {"nondegenerate", red.nondegenerate}, {"morse", cr.morse},
                 {"max_errors", errs}};
    if (hs.size() >= 2) r.summary["fitted_order"] = loglog_slope(hs, errs);
    return r;
  });
}

Plan plan_bs_ladder(std::optional<Section> model, Section p) {
  const FourierTaylorSeries P = need_series(need_model(model, "bs-ladder"), "bs-ladder");
  if (!P.angle_dependent().empty()) invalid("bs-ladder needs an angle-free series");
  const int d = P.dim();
  MaslovData maslov;
  maslov.alpha = p.integers("alpha");
  maslov.I0 = p.reals("I0");
  try {
    maslov.validate(d);
  } catch (const Error& e) {
    invalid(std::string("params: ") + e.what());
  }
  const auto hs = h_list(p);
  const double delta = window_delta(p);
  LadderOptions opt;
  opt.c_adm = positive(p.real("c_adm", 1.0), "params.c_adm");
  if (p.has("E")) opt.E = p.real("E");
  opt.shift_sign = p.integer("shift_sign", -1);
  require(opt.shift_sign == 1 || opt.shift_sign == -1, "params.shift_sign must be +1 or -1");
  p.finish();
  return capture([=] {
    RunResult r;
    const ActionPolynomial poly = as_action_polynomial(P);
    json sizes = json::array();
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const QuasiEnergyTable t = bs_energies(poly, d, maslov, hs[i], delta, opt);
      std::ostringstream os;
      write_ladder_csv(os, t);
      r.files.push_back({"ladder_" + h_tag(i) + ".csv", os.str()});
      sizes.push_back({{"h", hs[i]}, {"entries", t.entries.size()}, {"admissible", t.admissible}});
    }
    r.summary = {{"ladders", sizes}};
    return r;
  });
}

Plan plan_katok(std::optional<Section> model, Section p) {
  const ModelSpec m = need_model(model, "katok");
  if (!m.katok) invalid("katok needs a katok model, got '" + m.kind + "'");
  const KatokModel km = *m.katok;
  const auto branches = p.integers("branches", {1, -1});
  for (int b : branches) require(b == 1 || b == -1, "params.branches entries must be +1 or -1");
  const auto m1 = p.int_pair("m1"), m2 = p.int_pair("m2");
  require(m1[0] <= m1[1] && m2[0] <= m2[1], "params.m1 and params.m2 must be [lo, hi] ranges");
  const int p_index = p.integer("p", 1);
  const int returns = p.integer("section_returns", 20);
  const double dt = positive(p.real("dt", 0.01), "params.dt");
  require(p_index >= 1 && returns >= 2, "params.p >= 1 and params.section_returns >= 2 required");
  p.finish();
  return capture([=] {
    RunResult r;
    std::string beta = "branch,beta,section_advance,difference,C_action,C_error\n";
    double pb = 0.0;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) {
        const PhasePoint q = km.H.point({kTwoPi * i / 64, km.band * (2.0 * j / 63 - 1)},
                                        {std::cos(0.1 * i + j), std::sin(0.37 * i - j)});
        pb = std::max(pb, std::abs(poisson_bracket(km.lambda, km.eta, q)));
      }
    for (int b : branches) {
      const PhasePoint p0(2, {0.0, 0.0}, {km.equator_momentum(b), 1e-4}, 0b01);
      const SectionRotation sr = section_rotation(km.H, p0, 0, 1, returns, dt);
      const double bt = katok_beta(km.alpha, b);
      const KatokLadder L = katok_ladder(km, b, {m1[0], m1[1]}, {m2[0], m2[1]}, p_index);
      beta += (CsvRow() << b << bt << std::abs(sr.advance) << std::abs(sr.advance) - bt << L.C_action << L.C_error)
                  .str();
      std::ostringstream os;
      write_katok_csv(os, L);
      r.files.push_back({std::string("katok_ladder_") + (b > 0 ? "plus" : "minus") + ".csv", os.str()});
      if (!L.warning.empty()) r.steps.emplace_back("branch " + std::to_string(b), L.warning);
    }
    r.files.push_back({"katok_beta.csv", beta});
    r.summary = {{"alpha", km.alpha}, {"max_poisson_lambda_eta", pb}};
    return r;
  });
}

struct SpectralSetup {
  SymbolField H;
  std::vector<double> hs;
  SpectralStudyOptions opt;
};

SpectralSetup spectral_setup(std::optional<Section>& model, Section& p, const std::string& kind, bool needs_lambda) {
  SpectralSetup s;
  const MjPair pair = need_pair(need_model(model, kind), kind);
  s.H = pair.H;
  s.hs = h_list(p);
  s.opt.delta = window_delta(p);
  s.opt.E = p.real("E", pair.E);
  s.opt.n_max = p.integer("n_max", 0);
  s.opt.n_max_cap = p.integer("n_max_cap", 34);
  require(s.opt.n_max >= 0 && s.opt.n_max_cap >= 1, "params.n_max must be >= 0 and params.n_max_cap >= 1");
  const ModeLattice cap{2, s.opt.n_max_cap};
  if (cap.size() > kMaxDenseDim)
    invalid("params.n_max_cap = " + std::to_string(s.opt.n_max_cap) + " gives " + std::to_string(cap.size()) +
            " modes; the dense limit is " + std::to_string(kMaxDenseDim) + " (n_max_cap <= 34)");
  if (needs_lambda) s.opt.lambda = positive(p.real("lambda"), "params.lambda");
  s.opt.pairing = s.opt.projector = s.opt.trace = false;
  return s;
}

Plan plan_spectrum(std::optional<Section> model, Section p) {
  SpectralSetup s = spectral_setup(model, p, "spectrum", false);
  if (p.has("partition")) {
    const auto t = p.real_pair("partition");
    s.opt.partition = std::pair{t[0], t[1]};
    try {
      torus_partition(t[0], t[1]);
    } catch (const Error& e) {
      invalid(std::string("params.partition: ") + e.what());
    }
  }
  p.finish();
  return capture([=] {
    RunResult r;
    json rows = json::array();
    for (std::size_t i = 0; i < s.hs.size(); ++i) {
      const SpectralStudy st = spectral_study(s.H, s.hs[i], s.opt);
      std::ostringstream os;
      write_window_csv(os, st.window.eigenvalues, st.husimi ? &*st.husimi : nullptr);
      r.files.push_back({"window_" + h_tag(i) + ".csv", os.str()});
      rows.push_back({{"h", st.h}, {"n_max", st.n_max}, {"J", st.window.J_size()},
                      {"truncation", st.window.truncation_report}, {"eigen_residual", st.eigen_residual}});
      r.steps.emplace_back("h=" + csv_real(st.h), "ok");
    }
    r.summary = {{"windows", rows}};
    return r;
  });
}

Plan plan_pairing(std::optional<Section> model, Section p) {
  SpectralSetup s = spectral_setup(model, p, "pairing", true);
  s.opt.pairing = s.opt.projector = true;
  s.opt.policy.rel_spacing = positive(p.real("rel_spacing", 1e-3), "params.rel_spacing");
  s.opt.policy.power = positive(p.real("power", 4.0), "params.power");
  s.opt.mass_floor = p.real("mass_floor", 0.1);
  s.opt.I1 = p.real("I1", 0.0);
  require(s.opt.mass_floor >= 0.0 && s.opt.mass_floor < 1.0, "params.mass_floor must lie in [0, 1)");
  p.finish();
  return capture([=] {
    RunResult r;
    std::string csv =
        "h,n_max,J,mean_spacing,paired_fraction_a,paired_fraction_b,gs_pairs,gs_max_residual,gs_bound\n";
    std::vector<double> fa;
    for (double h : s.hs) {
      const SpectralStudy st = spectral_study(s.H, h, s.opt);
      const PairingReport& pr = *st.pairing;
      csv += (CsvRow() << h << st.n_max << long(pr.J_size) << pr.mean_spacing << pr.paired_fraction_a
                       << pr.paired_fraction_b << int(pr.gram_schmidt.size()) << st.gs_max_residual
                       << 10.0 * s.opt.lambda * h)
                 .str();
      fa.push_back(pr.paired_fraction_a);
      r.steps.emplace_back("h=" + csv_real(h), "ok");
    }
    r.files.push_back({"pairing_trend.csv", csv});
    r.summary = {{"paired_fraction_a", fa}};
    return r;
  });
}

Plan plan_trace(std::optional<Section> model, Section p) {
  SpectralSetup s = spectral_setup(model, p, "trace-test", false);
  s.opt.trace = true;
  p.finish();
  return capture([=] {
    RunResult r;
    std::string csv = "h,observable,parity,window_mean,liouville,gap\n";
    std::vector<double> gaps, odds;
    for (double h : s.hs) {
      const SpectralStudy st = spectral_study(s.H, h, s.opt);
      for (const auto& a : st.even)
        csv += (CsvRow() << h << a.name << std::string("even") << a.value.window_mean << a.value.liouville
                         << a.value.gap)
                   .str();
      for (const auto& a : st.odd)
        csv += (CsvRow() << h << a.name << std::string("odd") << a.value.window_mean << a.value.liouville
                         << a.value.gap)
                   .str();
      gaps.push_back(st.worst_even_gap());
      odds.push_back(st.worst_odd_mean());
      r.steps.emplace_back("h=" + csv_real(h), "ok");
    }
    r.files.push_back({"trace.csv", csv});
    r.summary = {{"worst_even_gap", gaps}, {"worst_odd_mean", odds}};
    return r;
  });
}

Plan plan_projector(std::optional<Section> model, Section p) {
  SpectralSetup s = spectral_setup(model, p, "projector", true);
  s.opt.projector = true;
  s.opt.I1 = p.real("I1", 0.0);
  p.finish();
  return capture([=] {
    RunResult r;
    std::string csv = "h,n_max,J,commutator,band_bound,integrable_commutator\n";
    for (double h : s.hs) {
      const SpectralStudy st = spectral_study(s.H, h, s.opt);
      csv += (CsvRow() << h << st.n_max << long(st.window.J_size()) << st.commutator << st.commutator_bound
                       << st.integrable_commutator)
                 .str();
      r.steps.emplace_back("h=" + csv_real(h), "ok");
    }
    r.files.push_back({"projector.csv", csv});
    r.summary = {{"I1", s.opt.I1}, {"lambda", s.opt.lambda}};
    return r;
  });
}

}  // namespace

Plan make_plan(const std::string& kind, std::optional<Section> model, Section params, std::uint64_t seed) {
  if (kind == "mjc-check") return plan_mjc_check(std::move(model), std::move(params));
  if (kind == "flow") return plan_flow(std::move(model), std::move(params), seed);
  if (kind == "kam") return plan_kam(std::move(model), std::move(params));
  if (kind == "bnf") return plan_bnf(std::move(model), std::move(params));
  if (kind == "larmor") return plan_larmor(std::move(model), std::move(params));
  if (kind == "bs-ladder") return plan_bs_ladder(std::move(model), std::move(params));
  if (kind == "katok") return plan_katok(std::move(model), std::move(params));
  if (kind == "spectrum") return plan_spectrum(std::move(model), std::move(params));
  if (kind == "pairing") return plan_pairing(std::move(model), std::move(params));
  if (kind == "trace-test") return plan_trace(std::move(model), std::move(params));
  if (kind == "projector") return plan_projector(std::move(model), std::move(params));
  invalid("unknown experiment '" + kind + "'");
}

}  // namespace cli

}  // namespace mjsc
