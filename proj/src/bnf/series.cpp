#include "mjsc/series.hpp"

#include <algorithm>
#include <istream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace mjsc {

namespace {

using Coeff = FourierTaylorSeries::Coeff;

// Precomputed e^{i k phi_j} for |k| <= k_max and iota_j^n for n <= deg_max.
struct EvalTables {
  int k_max;
  int deg_max;
  std::array<std::vector<Coeff>, 2> exps;
  std::array<std::vector<double>, 2> pows;

  EvalTables(int dim, int kmax, int dmax, std::span<const double> phi,
             std::span<const double> iota)
      : k_max(kmax), deg_max(dmax) {
    for (int j = 0; j < 2; ++j) {
      exps[j].assign(2 * kmax + 1, Coeff(1.0, 0.0));
      pows[j].assign(dmax + 2, 1.0);
      if (j >= dim) continue;
      const Coeff step = std::polar(1.0, phi[j]);
      for (int k = 1; k <= kmax; ++k) {
        exps[j][kmax + k] = exps[j][kmax + k - 1] * step;
        exps[j][kmax - k] = std::conj(exps[j][kmax + k]);
      }
      for (int n = 1; n <= dmax + 1; ++n) pows[j][n] = pows[j][n - 1] * iota[j];
    }
  }

  Coeff phase(const TermIndex& t) const {
    return exps[0][k_max + t.k[0]] * exps[1][k_max + t.k[1]];
  }
  double power(const TermIndex& t) const { return pows[0][t.a[0]] * pows[1][t.a[1]]; }
};

void require_caps(int k_max, int deg_max) {
  if (k_max < 0 || deg_max < 0 || k_max > kSeriesModeCap || deg_max > kSeriesDegreeCap)
    throw Error(Errc::TruncationOverflow,
                "series truncation (k_max=" + std::to_string(k_max) +
                    ", deg_max=" + std::to_string(deg_max) + ") exceeds hard caps (64, 12)");
}

}  // namespace

std::uint32_t TermIndex::pack() const {
  return (static_cast<std::uint32_t>(k[0] + kSeriesModeCap) << 24) |
         (static_cast<std::uint32_t>(k[1] + kSeriesModeCap) << 16) |
         (static_cast<std::uint32_t>(a[0]) << 8) | static_cast<std::uint32_t>(a[1]);
}

TermIndex TermIndex::unpack(std::uint32_t key) {
  TermIndex t;
  t.k[0] = static_cast<int>((key >> 24) & 0xffu) - kSeriesModeCap;
  t.k[1] = static_cast<int>((key >> 16) & 0xffu) - kSeriesModeCap;
  t.a[0] = static_cast<int>((key >> 8) & 0xffu);
  t.a[1] = static_cast<int>(key & 0xffu);
  return t;
}

FourierTaylorSeries::FourierTaylorSeries(int dim, int k_max, int deg_max)
    : dim_(dim), k_max_(k_max), deg_max_(deg_max) {
  if (dim != 1 && dim != 2) throw Error(Errc::InvalidArgument, "series dimension must be 1 or 2");
  require_caps(k_max, deg_max);
}

FourierTaylorSeries FourierTaylorSeries::constant(int dim, int k_max, int deg_max, double value) {
  FourierTaylorSeries s(dim, k_max, deg_max);
  s.add_term(TermIndex{}, value);
  return s;
}

FourierTaylorSeries FourierTaylorSeries::action(int dim, int k_max, int deg_max, int j) {
  FourierTaylorSeries s(dim, k_max, deg_max);
  TermIndex t;
  t.a[j] = 1;
  s.add_term(t, 1.0);
  return s;
}

FourierTaylorSeries FourierTaylorSeries::monomial(int dim, int k_max, int deg_max, TermIndex idx,
                                                  Coeff c) {
  FourierTaylorSeries s(dim, k_max, deg_max);
  s.add_term(idx, c);
  return s;
}

FourierTaylorSeries FourierTaylorSeries::cosine(int dim, int k_max, int deg_max,
                                                std::array<int, 2> k, std::array<int, 2> a,
                                                double c) {
  FourierTaylorSeries s(dim, k_max, deg_max);
  s.add_term(TermIndex{k, a}, 0.5 * c);
  s.add_term(TermIndex{{-k[0], -k[1]}, a}, 0.5 * c);
  return s;
}

FourierTaylorSeries FourierTaylorSeries::sine(int dim, int k_max, int deg_max,
                                              std::array<int, 2> k, std::array<int, 2> a,
                                              double c) {
  // sin t = (e^{it} - e^{-it}) / 2i
  FourierTaylorSeries s(dim, k_max, deg_max);
  s.add_term(TermIndex{k, a}, Coeff(0.0, -0.5 * c));
  s.add_term(TermIndex{{-k[0], -k[1]}, a}, Coeff(0.0, 0.5 * c));
  return s;
}

bool FourierTaylorSeries::admits(const TermIndex& idx) const {
  if (idx.mode_norm() > k_max_ || idx.degree() > deg_max_) return false;
  if (idx.a[0] < 0 || idx.a[1] < 0) return false;
  if (dim_ == 1 && (idx.k[1] != 0 || idx.a[1] != 0)) return false;
  return true;
}

void FourierTaylorSeries::add_term(const TermIndex& idx, Coeff c) {
  if (!admits(idx) || c == Coeff(0.0, 0.0)) return;
  auto [it, inserted] = terms_.try_emplace(idx.pack(), c);
  if (!inserted) {
    it->second += c;
    if (it->second == Coeff(0.0, 0.0)) terms_.erase(it);
  }
}

Coeff FourierTaylorSeries::coefficient(const TermIndex& idx) const {
  if (!admits(idx)) return {};
  auto it = terms_.find(idx.pack());
  return it == terms_.end() ? Coeff{} : it->second;
}

double FourierTaylorSeries::eval(std::span<const double> phi, std::span<const double> iota) const {
  return eval_complex(phi, iota).real();
}

Coeff FourierTaylorSeries::eval_complex(std::span<const double> phi,
                                        std::span<const double> iota) const {
  const EvalTables tab(dim_, k_max_, deg_max_, phi, iota);
  Coeff sum{};
  for (const auto& [key, c] : terms_) {
    const TermIndex t = TermIndex::unpack(key);
    sum += c * tab.phase(t) * tab.power(t);
  }
  return sum;
}

Coeff FourierTaylorSeries::eval_naive(std::span<const double> phi,
                                      std::span<const double> iota) const {
  Coeff sum{};
  for (const auto& [key, c] : terms_) {
    const TermIndex t = TermIndex::unpack(key);
    double arg = 0.0;
    double mono = 1.0;
    for (int j = 0; j < dim_; ++j) {
      arg += t.k[j] * phi[j];
      mono *= std::pow(iota[j], t.a[j]);
    }
    sum += c * std::exp(Coeff(0.0, arg)) * mono;
  }
  return sum;
}

State FourierTaylorSeries::gradient(std::span<const double> phi,
                                    std::span<const double> iota) const {
  const EvalTables tab(dim_, k_max_, deg_max_, phi, iota);
  State g = State::Zero(2 * dim_);
  for (const auto& [key, c] : terms_) {
    const TermIndex t = TermIndex::unpack(key);
    const Coeff cp = c * tab.phase(t);
    const double mono = tab.power(t);
    for (int j = 0; j < dim_; ++j) {
      // d/dphi_j: i k_j c e^{ik.phi} iota^a
      g[j] += (Coeff(0.0, t.k[j]) * cp).real() * mono;
      if (t.a[j] > 0) {
        const double dmono = t.a[j] * tab.pows[j][t.a[j] - 1] * tab.pows[1 - j][t.a[1 - j]];
        g[dim_ + j] += cp.real() * dmono;
      }
    }
  }
  return g;
}

double FourierTaylorSeries::reality_defect() const {
  double worst = 0.0;
  for (const auto& [key, c] : terms_) {
    TermIndex t = TermIndex::unpack(key);
    t.k = {-t.k[0], -t.k[1]};
    worst = std::max(worst, std::abs(coefficient(t) - std::conj(c)));
  }
  return worst;
}

int FourierTaylorSeries::max_degree() const {
  int m = -1;
  for_each([&](const TermIndex& t, Coeff) { m = std::max(m, t.degree()); });
  return m;
}

int FourierTaylorSeries::min_degree() const {
  int m = -1;
  for_each([&](const TermIndex& t, Coeff) { m = (m < 0) ? t.degree() : std::min(m, t.degree()); });
  return m;
}

int FourierTaylorSeries::max_mode() const {
  int m = 0;
  for_each([&](const TermIndex& t, Coeff) { m = std::max(m, t.mode_norm()); });
  return m;
}

namespace {
template <class Pred>
FourierTaylorSeries filter(const FourierTaylorSeries& s, Pred pred) {
  FourierTaylorSeries out(s.dim(), s.k_max(), s.deg_max());
  s.for_each([&](const TermIndex& t, Coeff c) {
    if (pred(t, c)) out.add_term(t, c);
  });
  return out;
}
}  // namespace

FourierTaylorSeries FourierTaylorSeries::angle_average() const {
  return filter(*this, [](const TermIndex& t, Coeff) { return t.angle_free(); });
}

FourierTaylorSeries FourierTaylorSeries::angle_dependent() const {
  return filter(*this, [](const TermIndex& t, Coeff) { return !t.angle_free(); });
}

FourierTaylorSeries FourierTaylorSeries::degree_part(int m) const {
  return filter(*this, [m](const TermIndex& t, Coeff) { return t.degree() == m; });
}

FourierTaylorSeries FourierTaylorSeries::degree_range(int lo, int hi) const {
  return filter(*this, [=](const TermIndex& t, Coeff) { return t.degree() >= lo && t.degree() <= hi; });
}

FourierTaylorSeries FourierTaylorSeries::truncated(int k_max, int deg_max) const {
  FourierTaylorSeries out(dim_, std::min(k_max, k_max_), std::min(deg_max, deg_max_));
  for_each([&](const TermIndex& t, Coeff c) { out.add_term(t, c); });
  return out;
}

FourierTaylorSeries FourierTaylorSeries::with_caps(int k_max, int deg_max) const {
  FourierTaylorSeries out(dim_, k_max, deg_max);
  for_each([&](const TermIndex& t, Coeff c) { out.add_term(t, c); });
  return out;
}

FourierTaylorSeries FourierTaylorSeries::chopped(double tol) const {
  return filter(*this, [tol](const TermIndex&, Coeff c) { return std::abs(c) > tol; });
}

FourierTaylorSeries FourierTaylorSeries::d_angle(int j) const {
  FourierTaylorSeries out(dim_, k_max_, deg_max_);
  for_each([&](const TermIndex& t, Coeff c) { out.add_term(t, Coeff(0.0, t.k[j]) * c); });
  return out;
}

FourierTaylorSeries FourierTaylorSeries::d_action(int j) const {
  FourierTaylorSeries out(dim_, k_max_, deg_max_);
  for_each([&](const TermIndex& t, Coeff c) {
    if (t.a[j] == 0) return;
    TermIndex u = t;
    u.a[j] -= 1;
    out.add_term(u, static_cast<double>(t.a[j]) * c);
  });
  return out;
}

FourierTaylorSeries& FourierTaylorSeries::operator+=(const FourierTaylorSeries& o) {
  o.for_each([&](const TermIndex& t, Coeff c) { add_term(t, c); });
  return *this;
}

FourierTaylorSeries& FourierTaylorSeries::operator-=(const FourierTaylorSeries& o) {
  o.for_each([&](const TermIndex& t, Coeff c) { add_term(t, -c); });
  return *this;
}

FourierTaylorSeries& FourierTaylorSeries::operator*=(Coeff s) {
  if (s == Coeff(0.0, 0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [key, c] : terms_) c *= s;
  return *this;
}

double FourierTaylorSeries::max_abs() const {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

FourierTaylorSeries multiply(const FourierTaylorSeries& f, const FourierTaylorSeries& g) {
  if (f.dim() != g.dim()) throw Error(Errc::InvalidArgument, "series dimension mismatch");
  const int k_max = std::min(f.k_max(), g.k_max());
  const int deg_max = std::min(f.deg_max(), g.deg_max());
  std::vector<std::pair<TermIndex, Coeff>> gt;
  gt.reserve(g.size());
  g.for_each([&](const TermIndex& t, Coeff c) { gt.emplace_back(t, c); });

  std::unordered_map<std::uint32_t, Coeff> acc;
  f.for_each([&](const TermIndex& s, Coeff cs) {
    for (const auto& [t, ct] : gt) {
      TermIndex u{{s.k[0] + t.k[0], s.k[1] + t.k[1]}, {s.a[0] + t.a[0], s.a[1] + t.a[1]}};
      if (u.degree() > deg_max || u.mode_norm() > k_max) continue;
      acc[u.pack()] += cs * ct;
    }
  });
  // Deterministic insertion: sort by packed key before accumulating.
  std::vector<std::pair<std::uint32_t, Coeff>> sorted(acc.begin(), acc.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  FourierTaylorSeries out(f.dim(), k_max, deg_max);
  for (const auto& [key, c] : sorted) out.add_term(TermIndex::unpack(key), c);
  return out;
}

FourierTaylorSeries poisson(const FourierTaylorSeries& f, const FourierTaylorSeries& g) {
  if (f.dim() != g.dim()) throw Error(Errc::InvalidArgument, "series dimension mismatch");
  FourierTaylorSeries out(f.dim(), std::min(f.k_max(), g.k_max()),
                          std::min(f.deg_max(), g.deg_max()));
  for (int j = 0; j < f.dim(); ++j) {
    out += multiply(f.d_action(j), g.d_angle(j));
    out -= multiply(f.d_angle(j), g.d_action(j));
  }
  return out;
}

FourierTaylorSeries lie_transform(const FourierTaylorSeries& g, const FourierTaylorSeries& f) {
  FourierTaylorSeries result = f;
  FourierTaylorSeries term = f;
  const int n_max = std::max(f.deg_max(), 1) + 1;
  for (int n = 1; n <= n_max; ++n) {
    term = poisson(g, term);
    if (term.empty()) break;
    term *= 1.0 / n;
    result += term;
  }
  return result;
}

void write_series(std::ostream& os, const FourierTaylorSeries& s) {
  os << "fourier_taylor " << s.dim() << ' ' << s.k_max() << ' ' << s.deg_max() << '\n';
  os << std::setprecision(17);
  s.for_each([&](const TermIndex& t, FourierTaylorSeries::Coeff c) {
    os << t.k[0] << ' ' << t.k[1] << ' ' << t.a[0] << ' ' << t.a[1] << ' ' << c.real() << ' '
       << c.imag() << '\n';
  });
}

FourierTaylorSeries read_series(std::istream& is) {
  std::string line;
  int dim = 0, k_max = 0, deg_max = 0;
  bool have_header = false;
  FourierTaylorSeries out(2, 0, 0);
  while (std::getline(is, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    if (!have_header) {
      std::string tag;
      if (!(ls >> tag)) continue;
      if (tag != "fourier_taylor" || !(ls >> dim >> k_max >> deg_max))
        throw Error(Errc::InvalidArgument, "series text: missing 'fourier_taylor d k_max deg_max' header");
      out = FourierTaylorSeries(dim, k_max, deg_max);
      have_header = true;
      continue;
    }
    TermIndex t;
    double re = 0.0, im = 0.0;
    if (!(ls >> t.k[0])) continue;
    if (!(ls >> t.k[1] >> t.a[0] >> t.a[1] >> re))
      throw Error(Errc::InvalidArgument, "series text: malformed term line '" + line + "'");
    ls >> im;
    if (!out.admits(t))
      throw Error(Errc::InvalidArgument, "series text: term outside truncation box: '" + line + "'");
    out.add_term(t, {re, im});
  }
  if (!have_header) throw Error(Errc::InvalidArgument, "series text: empty input");
  return out;
}

}  // namespace mjsc
