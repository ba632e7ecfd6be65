#include "config_internal.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace mjsc::cli {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::ConfigInvalid, msg); }

template <class T>
T scalar_as(const YAML::Node& n, const std::string& where) {
  if (!n.IsScalar()) invalid(where + ": expected a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    invalid(where + ": cannot read '" + n.Scalar() + "'");
  }
}

}  // namespace

Section::Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
  if (node_ && !node_.IsNull() && !node_.IsMap()) invalid(path_ + ": expected a mapping");
}

bool Section::has(const std::string& key) const { return node_ && node_.IsMap() && node_[key]; }

YAML::Node Section::get(const std::string& key) {
  if (!has(key)) fail(key, "missing required key");
  used_.insert(key);
  return node_[key];
}

void Section::fail(const std::string& key, const std::string& what) const {
  invalid(path_ + "." + key + ": " + what);
}

double Section::real(const std::string& key) {
  const double v = scalar_as<double>(get(key), path_ + "." + key);
  if (!std::isfinite(v)) fail(key, "not finite");
  return v;
}
double Section::real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }

int Section::integer(const std::string& key) { return scalar_as<int>(get(key), path_ + "." + key); }
int Section::integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

bool Section::flag(const std::string& key, bool fallback) {
  return has(key) ? scalar_as<bool>(get(key), path_ + "." + key) : fallback;
}

std::string Section::text(const std::string& key) { return scalar_as<std::string>(get(key), path_ + "." + key); }
std::string Section::text(const std::string& key, const std::string& fallback) {
  return has(key) ? text(key) : fallback;
}

std::vector<double> Section::reals(const std::string& key) {
  const YAML::Node n = get(key);
  std::vector<double> out;
  if (n.IsScalar()) {
    out.push_back(scalar_as<double>(n, path_ + "." + key));
  } else if (n.IsSequence()) {
    for (std::size_t i = 0; i < n.size(); ++i)
      out.push_back(scalar_as<double>(n[i], path_ + "." + key + "[" + std::to_string(i) + "]"));
  } else {
    fail(key, "expected a number or a list of numbers");
  }
  if (out.empty()) fail(key, "empty list");
  for (double v : out)
    if (!std::isfinite(v)) fail(key, "not finite");
  return out;
}
std::vector<double> Section::reals(const std::string& key, std::vector<double> fallback) {
  return has(key) ? reals(key) : fallback;
}

std::vector<int> Section::integers(const std::string& key) {
  const YAML::Node n = get(key);
  std::vector<int> out;
  if (n.IsScalar()) {
    out.push_back(scalar_as<int>(n, path_ + "." + key));
  } else if (n.IsSequence()) {
    for (std::size_t i = 0; i < n.size(); ++i)
      out.push_back(scalar_as<int>(n[i], path_ + "." + key + "[" + std::to_string(i) + "]"));
  } else {
    fail(key, "expected an integer or a list of integers");
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}
std::vector<int> Section::integers(const std::string& key, std::vector<int> fallback) {
  return has(key) ? integers(key) : fallback;
}

std::array<int, 2> Section::int_pair(const std::string& key) {
  const auto v = integers(key);
  if (v.size() != 2) fail(key, "expected two integers");
  return {v[0], v[1]};
}

std::array<double, 2> Section::real_pair(const std::string& key) {
  const auto v = reals(key);
  if (v.size() != 2) fail(key, "expected two numbers");
  return {v[0], v[1]};
}

std::vector<Section> Section::list(const std::string& key) {
  const YAML::Node n = get(key);
  if (!n.IsSequence()) fail(key, "expected a list");
  std::vector<Section> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.emplace_back(n[i], path_ + "." + key + "[" + std::to_string(i) + "]");
  return out;
}

Section Section::child(const std::string& key) { return Section(get(key), path_ + "." + key); }

void Section::finish() const {
  if (!node_ || !node_.IsMap()) return;
  for (const auto& kv : node_) {
    const std::string k = kv.first.as<std::string>();
    if (!used_.count(k)) invalid(path_ + ": unknown key '" + k + "'");
  }
}

double positive(double v, const std::string& what) {
  if (!(v > 0.0)) invalid(what + " must be > 0");
  return v;
}

void require(bool ok, const std::string& what) {
  if (!ok) invalid(what);
}

std::string csv_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<TrigTerm> trig_terms(Section& s, const std::string& key, bool scalar_k) {
  std::vector<TrigTerm> out;
  for (Section t : s.list(key)) {
    TrigTerm term;
    if (scalar_k) {
      term.k = {t.integer("k"), 0};
    } else {
      term.k = t.int_pair("k");
    }
    term.a = t.real("a", 0.0);
    term.b = t.real("b", 0.0);
    t.finish();
    out.push_back(term);
  }
  return out;
}

FourierTaylorSeries custom_series(Section& m) {
  if (m.has("preset")) {
    const std::string preset = m.text("preset");
    if (preset == "standard_bnf") return standard_bnf_series(m.real("eps", 0.05));
    if (preset == "larmor") return larmor_series(m.real("eps", 0.02));
    invalid(m.path() + ".preset: unknown preset '" + preset + "' (standard_bnf, larmor)");
  }
  const int dim = m.integer("dim", 2);
  require(dim == 1 || dim == 2, m.path() + ".dim must be 1 or 2");
  const int k_max = m.integer("k_max", 8), deg_max = m.integer("deg_max", 8);
  require(k_max >= 0 && deg_max >= 0, m.path() + ": k_max and deg_max must be >= 0");
  FourierTaylorSeries s(dim, k_max, deg_max);
  for (Section t : m.list("terms")) {
    const auto kv = t.integers("k");
    const auto av = t.integers("alpha");
    require(int(kv.size()) == dim && int(av.size()) == dim, t.path() + ": k and alpha need " + std::to_string(dim) + " entries");
    const std::array<int, 2> k{kv[0], dim == 2 ? kv[1] : 0};
    const std::array<int, 2> a{av[0], dim == 2 ? av[1] : 0};
    require(a[0] >= 0 && a[1] >= 0, t.path() + ".alpha must be >= 0");
    require(std::abs(k[0]) <= k_max && std::abs(k[1]) <= k_max && a[0] + a[1] <= deg_max,
            t.path() + ": term outside the (k_max, deg_max) box");
    const double c = t.real("coeff");
    const std::string trig = t.text("trig", "cos");
    require(trig == "cos" || trig == "sin", t.path() + ".trig must be cos or sin");
    t.finish();
    s = s + (trig == "cos" ? FourierTaylorSeries::cosine(dim, k_max, deg_max, k, a, c)
                           : FourierTaylorSeries::sine(dim, k_max, deg_max, k, a, c));
  }
  return s;
}

}  // namespace

ModelSpec parse_model(Section m) {
  ModelSpec spec;
  spec.kind = m.text("kind");
  // Model constructors throw numerical errors (e.g. E below max V); at
  // validation time these are configuration problems.
  auto guarded = [&](auto&& build) {
    try {
      build();
    } catch (const Error& e) {
      if (e.code() == Errc::ConfigInvalid) throw;
      invalid(m.path() + ": " + e.what());
    }
  };
  if (spec.kind == "mechanical") {
    const auto metric = m.has("metric") ? m.real_pair("metric") : std::array<double, 2>{1.0, 1.0};
    TrigPolynomial V;
    V.dim = 2;
    V.terms = trig_terms(m, "potential", false);
    const double E = m.real("energy", 1.0);
    guarded([&] { spec.pair = build_mechanical_pair(CoMetric::diagonal(metric[0], metric[1]), V, E); });
  } else if (spec.kind == "liouville") {
    TrigPolynomial a, b;
    a.dim = b.dim = 1;
    a.terms = trig_terms(m, "a", true);
    b.terms = trig_terms(m, "b", true);
    guarded([&] { spec.pair = build_liouville_pair(a, b); });
  } else if (spec.kind == "waterwave") {
    const double D0 = positive(m.real("depth"), m.path() + ".depth");
    const double D1 = m.real("depth_ripple", 0.0);
    const double mu = m.real("surface_tension", 0.0);
    require(mu >= 0.0, m.path() + ".surface_tension must be >= 0");
    const double E = positive(m.real("energy", 1.0), m.path() + ".energy");
    const double tol = m.real("tol", 1e-8);
    const bool strict = m.flag("strict", false);
    WaterWaveSymbol w;
    w.depth_D = [D0, D1](std::span<const double> x) { return D0 + D1 * std::cos(x[0]); };
    w.surface_tension = [mu](std::span<const double>) { return mu; };
    guarded([&] { spec.pair = build_waterwave_pair(w, waterwave_matched_g(w, E), E, strict, tol); });
  } else if (spec.kind == "katok") {
    const double alpha = m.real("alpha");
    const double band = m.real("band", kPi / 2 - 0.1);
    guarded([&] { spec.katok = katok_hamiltonian(alpha, band); });
  } else if (spec.kind == "custom_fourier") {
    const double E = m.real("energy", 1.0);
    spec.series = custom_series(m);
    spec.pair = build_series_pair(*spec.series, E);
  } else {
    invalid(m.path() + ".kind: unknown model kind '" + spec.kind +
            "' (mechanical, waterwave, liouville, katok, custom_fourier)");
  }
  m.finish();
  return spec;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  ParsedConfig cfg;
  cfg.text = ss.str();

  YAML::Node root;
  try {
    root = YAML::Load(cfg.text);
  } catch (const YAML::Exception& e) {
    invalid("YAML parse error: " + std::string(e.what()));
  }
  if (!root.IsMap()) invalid("config root must be a mapping");
  Section top(root, "config");
  cfg.kind = top.text("experiment");
  bool known = false;
  for (const auto& info : experiment_catalog()) known = known || info.kind == cfg.kind;
  if (!known) {
    const std::string hint = suggest_kind(cfg.kind);
    invalid("unknown experiment '" + cfg.kind + "'" + (hint.empty() ? "" : "; did you mean '" + hint + "'?"));
  }
  const int seed = top.integer("seed", 0);
  require(seed >= 0, "config.seed must be >= 0");
  cfg.seed = std::uint64_t(seed);
  cfg.output = top.text("output", cfg.kind);
  require(!cfg.output.empty() && std::filesystem::path(cfg.output).is_relative(),
          "config.output must be a relative directory name");
  std::optional<Section> model;
  if (top.has("model")) model = top.child("model");
  Section params = top.has("params") ? top.child("params") : Section(YAML::Node(), "config.params");
  top.finish();
  cfg.plan = make_plan(cfg.kind, model, params, cfg.seed);
  return cfg;
}

}  // namespace mjsc::cli
