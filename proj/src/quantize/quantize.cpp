#include "mjsc/quantize.hpp"

#include "mjsc/flow.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <memory>
#include <ostream>

namespace mjsc {

void MaslovData::validate(int d) const {
  if (int(alpha.size()) != d || int(I0.size()) != d)
    throw Error(Errc::InvalidArgument, "Maslov data must have d components");
  for (int a : alpha)
    if (a < 0 || a > 3) throw Error(Errc::InvalidArgument, "Maslov indices must lie in {0, 1, 2, 3}");
}

ActionPolynomial as_action_polynomial(const FourierTaylorSeries& P) {
  if (!P.angle_dependent().empty())
    throw Error(Errc::InvalidArgument, "ladder polynomial must be angle-free");
  auto s = std::make_shared<const FourierTaylorSeries>(P);
  return [s](std::span<const double> iota) {
    const std::array<double, 2> zero{0.0, 0.0};
    return s->eval(std::span<const double>(zero.data(), s->dim()), iota.first(s->dim()));
  };
}

QuasiEnergyTable bs_energies(const ActionPolynomial& P, int dim, const MaslovData& maslov, double h,
                             double delta, const LadderOptions& opt) {
  if (dim != 1 && dim != 2) throw Error(Errc::InvalidArgument, "ladder dimension must be 1 or 2");
  maslov.validate(dim);
  if (!(h > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(Errc::InvalidArgument, "need h > 0 and 0 < delta < 1");
  if (!(opt.c_adm > 0.0)) throw Error(Errc::InvalidArgument, "c_adm must be > 0");
  if (opt.shift_sign != 1 && opt.shift_sign != -1) throw Error(Errc::InvalidArgument, "shift_sign must be +1 or -1");

  QuasiEnergyTable t;
  t.dim = dim;
  t.h = h;
  t.delta = delta;
  t.shift_sign = opt.shift_sign;
  const std::array<double, 2> zero{0.0, 0.0};
  const double Ec = opt.E ? *opt.E : P(std::span<const double>(zero.data(), dim));
  const double hd = std::pow(h, delta);
  t.window_lo = Ec - hd;
  t.window_hi = Ec + hd;

  const double rad = opt.c_adm * hd;
  std::array<long, 2> lo{0, 0}, hi{0, 0};
  for (int j = 0; j < dim; ++j) {
    lo[j] = long(std::ceil((maslov.I0[j] - rad) / h - 1e-9));
    hi[j] = long(std::floor((maslov.I0[j] + rad) / h + 1e-9));
  }
  for (long a = lo[0]; a <= hi[0]; ++a)
    for (long b = lo[1]; b <= hi[1]; ++b) {
      const std::array<long, 2> k{a, b};
      bool ok = true;
      for (int j = 0; j < dim; ++j)
        if (std::abs(k[j] * h - maslov.I0[j]) > rad * (1 + 1e-12)) ok = false;
      if (!ok) continue;
      ++t.admissible;
      QuasiEnergy q;
      q.k = {int(a), int(b)};
      for (int j = 0; j < dim; ++j)
        q.arg[j] = k[j] * h - maslov.I0[j] + opt.shift_sign * h * maslov.alpha[j] / 4.0;
      q.energy = P(std::span<const double>(q.arg.data(), dim));
      if (q.energy >= t.window_lo && q.energy <= t.window_hi) t.entries.push_back(q);
    }
  std::sort(t.entries.begin(), t.entries.end(), [](const QuasiEnergy& x, const QuasiEnergy& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    return x.k < y.k;
  });
  t.empty_ladder = t.entries.empty();
  return t;
}

double stable_count(const KamMask& mask, double h, double delta) {
  return stable_dimension_estimate(mask, h, delta);
}

double katok_beta(double alpha, int branch) {
  if (!(std::abs(alpha) < 1.0)) throw Error(Errc::FluxOutOfRange, "|alpha| must be < 1");
  return kTwoPi / (1.0 + (branch > 0 ? alpha : -alpha));
}

std::optional<std::pair<long, int>> near_rational(double x, double tol, int q_max) {
  for (int q = 1; q <= q_max; ++q) {
    const long p = std::lround(x * q);
    if (std::abs(x - double(p) / q) <= tol) return std::make_pair(p, q);
  }
  return std::nullopt;
}

Loop katok_equator_loop(const KatokModel& model, int branch) {
  const double xi1 = model.equator_momentum(branch);
  const double sgn = branch > 0 ? 1.0 : -1.0;
  return [xi1, sgn](double s) { return PhasePoint(2, {sgn * kTwoPi * s, 0.0}, {xi1, 0.0}, 0b01); };
}

KatokLadder katok_ladder(const KatokModel& model, int branch, std::pair<int, int> m1_range,
                         std::pair<int, int> m2_range, int p_index) {
  if (branch != 1 && branch != -1) throw Error(Errc::InvalidArgument, "branch must be +1 or -1");
  KatokLadder l;
  l.branch = branch;
  l.alpha = model.alpha;
  l.p_index = p_index;
  l.beta = katok_beta(model.alpha, branch);
  if (model.alpha != 0.0) {
    if (auto r = near_rational(model.alpha))
      l.warning = "alpha is within 1e-9 of " + std::to_string(r->first) + "/" + std::to_string(r->second) +
                  "; the ladder assumes irrational alpha";
  }
  const CycleAction C = action_integral(katok_equator_loop(model, branch), branch > 0 ? 0 : 1);
  l.C_action = C.value;
  l.C_error = C.quadrature_error;
  for (int m1 = m1_range.first; m1 <= m1_range.second; ++m1)
    for (int m2 = m2_range.first; m2 <= m2_range.second; ++m2) {
      const double den = kTwoPi * m1 + m2 * l.beta + l.beta / 2 + p_index * kPi;
      if (!(den > 0.0)) {
        ++l.skipped_nonpositive;
        continue;
      }
      l.entries.push_back({m1, m2, l.C_action / den, 1.0});
    }
  return l;
}

HarmonicLevels larmor_harmonic_levels(const LarmorReduction& red, double k1, double h, int count) {
  if (k1 == 0.0) throw Error(Errc::InvalidArgument, "harmonic levels need k1 != 0");
  HarmonicLevels out;
  const int grid = 4096;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double x = kTwoPi * i / grid;
    const double v = k1 * red.omega1(x);
    if (v < best) {
      best = v;
      out.x_min = x;
    }
  }
  // Newton polish on V' = 0.
  double x = out.x_min;
  for (int it = 0; it < 50; ++it) {
    const double d2 = red.omega1_d(x, 2);
    if (d2 == 0.0) break;
    const double step = red.omega1_d(x, 1) / d2;
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  out.x_min = wrap_angle(x);
  out.V_min = k1 * red.omega1(out.x_min);
  out.curvature = k1 * red.omega1_d(out.x_min, 2);
  if (!(out.curvature > 0.0)) throw Error(Errc::NondegeneracyFailed, "potential minimum is degenerate");
  for (int n = 0; n < count; ++n) out.levels.push_back(out.V_min + h * std::sqrt(out.curvature) * (n + 0.5));
  return out;
}

void write_ladder_csv(std::ostream& os, const QuasiEnergyTable& t) {
  os << (t.dim == 2 ? "k1,k2,arg1,arg2,energy\n" : "k,arg,energy\n");
  char buf[200];
  for (const auto& q : t.entries) {
    if (t.dim == 2)
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g\n", q.k[0], q.k[1], q.arg[0], q.arg[1], q.energy);
    else
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", q.k[0], q.arg[0], q.energy);
    os << buf;
  }
}

void write_katok_csv(std::ostream& os, const KatokLadder& l) {
  os << "m1,m2,h_m,energy\n";
  char buf[160];
  for (const auto& r : l.entries) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", r.m1, r.m2, r.h, r.energy);
    os << buf;
  }
}

}  // namespace mjsc
