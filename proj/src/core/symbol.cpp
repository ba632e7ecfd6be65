#include "mjsc/symbol.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace mjsc {

State SymbolField::grad(const PhasePoint& p) const {
  if (analytic_grad) return analytic_grad(p);
  return grad_fd(p);
}

State SymbolField::grad_fd(const PhasePoint& p, double step) const {
  State g(2 * dim);
  for (int j = 0; j < 2 * dim; ++j) {
    PhasePoint plus = p;
    PhasePoint minus = p;
    // Perturb without re-wrapping so the stencil stays symmetric.
    if (j < dim) {
      plus.x[j] += step;
      minus.x[j] -= step;
    } else {
      plus.xi[j - dim] += step;
      minus.xi[j - dim] -= step;
    }
    g[j] = (value(plus) - value(minus)) / (2.0 * step);
  }
  return g;
}

State SymbolField::hamilton_field(const State& s) const {
  const State g = grad(s);
  State f(2 * dim);
  for (int j = 0; j < dim; ++j) {
    f[j] = g[dim + j];
    f[dim + j] = -g[j];
  }
  return f;
}

SymbolField SymbolField::from_series(const FourierTaylorSeries& s, std::string name) {
  SymbolField f;
  f.dim = s.dim();
  f.name = std::move(name);
  f.fourier_rep = s;
  auto series = std::make_shared<const FourierTaylorSeries>(s);
  const int d = s.dim();
  f.value = [series, d](const PhasePoint& p) {
    return series->eval(std::span<const double>(p.x.data(), d), std::span<const double>(p.xi.data(), d));
  };
  f.analytic_grad = [series, d](const PhasePoint& p) {
    return series->gradient(std::span<const double>(p.x.data(), d), std::span<const double>(p.xi.data(), d));
  };
  // Group terms by Fourier mode for the Weyl quantizer.
  std::map<std::pair<int, int>, FourierTaylorSeries> by_mode;
  s.for_each([&](const TermIndex& t, FourierTaylorSeries::Coeff c) {
    auto key = std::make_pair(t.k[0], t.k[1]);
    auto it = by_mode.try_emplace(key, d, s.k_max(), s.deg_max()).first;
    it->second.add_term(TermIndex{{0, 0}, t.a}, c);
  });
  for (auto& [key, part] : by_mode) {
    auto poly = std::make_shared<const FourierTaylorSeries>(part);
    XMode m;
    m.k = {key.first, key.second};
    m.coeff = [poly, d](std::span<const double> xi) {
      const std::array<double, 2> zero{0.0, 0.0};
      return poly->eval_complex(std::span<const double>(zero.data(), d), xi.first(d));
    };
    f.x_modes.push_back(std::move(m));
  }
  f.time_reversal = false;
  return f;
}

double poisson_bracket(const SymbolField& f, const SymbolField& g, const PhasePoint& p) {
  if (f.dim != g.dim) throw Error(Errc::InvalidArgument, "poisson_bracket: dimension mismatch");
  const State gf = f.grad(p);
  const State gg = g.grad(p);
  const int d = f.dim;
  double s = 0.0;
  for (int j = 0; j < d; ++j) s += gf[d + j] * gg[j] - gf[j] * gg[d + j];
  return s;
}

std::vector<PhasePoint> probe_grid(const SymbolField& s) {
  static constexpr std::array<double, 5> radii{0.25, 0.5, 1.0, 1.5, 2.0};
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  std::vector<PhasePoint> pts;
  const int n = 16;
  const int n2 = s.dim == 2 ? n : 1;
  int counter = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n2; ++j) {
      std::array<double, 2> x{0.0, 0.0};
      x[0] = s.x_lo[0] + (s.x_hi[0] - s.x_lo[0]) * (i + 0.5) / n;
      if (s.dim == 2) x[1] = s.x_lo[1] + (s.x_hi[1] - s.x_lo[1]) * (j + 0.5) / n;
      for (double r : radii) {
        const double th = golden_angle * counter++;
        std::array<double, 2> xi{0.0, 0.0};
        if (s.dim == 2) {
          xi = {r * std::cos(th), r * std::sin(th)};
        } else {
          xi[0] = (counter % 2 == 0) ? r : -r;
        }
        pts.emplace_back(s.dim, x, xi, s.angle_mask);
      }
    }
  }
  return pts;
}

double fourier_consistency_defect(const SymbolField& s) {
  if (!s.fourier_rep) return 0.0;
  double worst = 0.0;
  const int d = s.dim;
  for (const auto& p : probe_grid(s)) {
    const double series = s.fourier_rep->eval(std::span<const double>(p.x.data(), d),
                                              std::span<const double>(p.xi.data(), d));
    worst = std::max(worst, std::abs(s.eval(p) - series));
  }
  return worst;
}

double time_reversal_defect(const SymbolField& s) {
  double worst = 0.0;
  for (const auto& p : probe_grid(s)) {
    PhasePoint q = p;
    q.xi = {-p.xi[0], -p.xi[1]};
    worst = std::max(worst, std::abs(s.eval(p) - s.eval(q)));
  }
  return worst;
}

void validate_symbol(const SymbolField& s) {
  if (!s.value) throw Error(Errc::InvalidArgument, "symbol '" + s.name + "' has no evaluator");
  if (s.fourier_rep) {
    const double d = fourier_consistency_defect(s);
    if (d > 1e-10)
      throw Error(Errc::InvalidArgument,
                  "symbol '" + s.name + "' disagrees with its series: " + std::to_string(d));
  }
  if (s.time_reversal) {
    const double d = time_reversal_defect(s);
    if (d > 1e-12)
      throw Error(Errc::InvalidArgument,
                  "symbol '" + s.name + "' flagged time-reversal invariant but defect " + std::to_string(d));
  }
}

SymbolField sum(const SymbolField& a, const SymbolField& b, std::string name) {
  if (a.dim != b.dim) throw Error(Errc::InvalidArgument, "sum: dimension mismatch");
  SymbolField s = a;
  s.name = std::move(name);
  auto fa = a.value;
  auto fb = b.value;
  s.value = [fa, fb](const PhasePoint& p) { return fa(p) + fb(p); };
  if (a.analytic_grad && b.analytic_grad) {
    auto ga = a.analytic_grad;
    auto gb = b.analytic_grad;
    s.analytic_grad = [ga, gb](const PhasePoint& p) -> State { return ga(p) + gb(p); };
  } else {
    s.analytic_grad = nullptr;
  }
  if (a.fourier_rep && b.fourier_rep) {
    s.fourier_rep = *a.fourier_rep + *b.fourier_rep;
  } else {
    s.fourier_rep.reset();
  }
  s.time_reversal = a.time_reversal && b.time_reversal;
  if (!a.x_modes.empty() && !b.x_modes.empty()) {
    s.x_modes = a.x_modes;
    s.x_modes.insert(s.x_modes.end(), b.x_modes.begin(), b.x_modes.end());
  } else {
    s.x_modes.clear();
  }
  return s;
}

SymbolField scaled(const SymbolField& a, double c) {
  SymbolField s = a;
  auto fa = a.value;
  s.value = [fa, c](const PhasePoint& p) { return c * fa(p); };
  if (a.analytic_grad) {
    auto ga = a.analytic_grad;
    s.analytic_grad = [ga, c](const PhasePoint& p) -> State { return c * ga(p); };
  }
  if (a.fourier_rep) s.fourier_rep = *a.fourier_rep * FourierTaylorSeries::Coeff(c);
  for (auto& m : s.x_modes) {
    auto f = m.coeff;
    m.coeff = [f, c](std::span<const double> xi) { return c * f(xi); };
  }
  return s;
}

}  // namespace mjsc
