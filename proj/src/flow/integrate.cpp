#include "mjsc/flow.hpp"

#include <algorithm>
#include <array>

namespace mjsc {

State gbs_step(const std::function<State(const State&)>& f, const State& y, double h) {
  static constexpr std::array<int, 4> seq{2, 4, 6, 8};
  std::array<State, 4> T;
  const State f0 = f(y);
  for (int i = 0; i < 4; ++i) {
    const int n = seq[i];
    const double hs = h / n;
    State z0 = y;
    State z1 = y + hs * f0;
    for (int m = 1; m < n; ++m) {
      State z2 = z0 + 2.0 * hs * f(z1);
      z0 = std::move(z1);
      z1 = std::move(z2);
    }
    T[i] = 0.5 * (z1 + z0 + hs * f(z1));
  }
  // Aitken-Neville in (h/n)^2 toward 0.
  for (int k = 1; k < 4; ++k)
    for (int i = 3; i >= k; --i) {
      const double r = double(seq[i]) / seq[i - k];
      T[i] = T[i] + (T[i] - T[i - 1]) / (r * r - 1.0);
    }
  return T[3];
}

namespace {

int step_count(double t_end, double dt) {
  if (!(dt != 0.0) || !std::isfinite(dt) || !std::isfinite(t_end))
    throw Error(Errc::InvalidArgument, "integrate: dt and t_end must be finite and nonzero");
  const double n = std::ceil(std::abs(t_end / dt) - 1e-9);
  if (n > 2e9) throw Error(Errc::InvalidArgument, "integrate: too many steps");
  return std::max(1, int(n));
}

}  // namespace

Trajectory integrate(const SymbolField& sym, const PhasePoint& p0, double t_end, double dt,
                     const IntegrateOptions& opt) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw Error(Errc::InvalidArgument, "integrate: need dt > 0 and t_end > 0");
  const int n = step_count(t_end, dt);
  const double h = t_end / n;
  const int stride = std::max(1, opt.stride);
  auto field = [&sym](const State& s) { return sym.hamilton_field(s); };

  Trajectory tr;
  tr.method = "gbs8";
  tr.dt = h;
  tr.stride = stride;
  tr.times.reserve(n / stride + 2);
  tr.points.reserve(n / stride + 2);
  State y = p0.to_state();
  const double e0 = sym.eval(p0);
  tr.times.push_back(0.0);
  tr.points.push_back(PhasePoint::from_state(y, sym.angle_mask));
  tr.energies.push_back(e0);
  for (int i = 1; i <= n; ++i) {
    y = gbs_step(field, y, h);
    if (!y.allFinite())
      throw Error(Errc::StepRejected, "non-finite state at t = " + std::to_string(i * h));
    if (i % stride == 0 || i == n) {
      PhasePoint p = PhasePoint::from_state(y, sym.angle_mask);
      const double e = sym.eval(p);
      tr.energy_drift = std::max(tr.energy_drift, std::abs(e - e0));
      tr.times.push_back(i * h);
      tr.points.push_back(p);
      tr.energies.push_back(e);
    }
  }
  if (opt.checked && tr.energy_drift > opt.drift_per_time * std::max(t_end, 1.0))
    throw Error(Errc::EnergyDriftExceeded,
                "drift " + std::to_string(tr.energy_drift) + " over t = " + std::to_string(t_end));
  return tr;
}

State flow_map(const SymbolField& sym, const State& y0, double t, double dt) {
  const int n = step_count(t, dt);
  const double h = t / n;
  auto field = [&sym](const State& s) { return sym.hamilton_field(s); };
  State y = y0;
  for (int i = 0; i < n; ++i) {
    y = gbs_step(field, y, h);
    if (!y.allFinite()) throw Error(Errc::StepRejected, "non-finite state in flow_map");
  }
  return y;
}

SectionRotation section_rotation(const SymbolField& sym, const PhasePoint& p0, int angle_coord,
                                 int transverse_coord, int n_returns, double dt) {
  if (n_returns < 1 || !(dt > 0.0)) throw Error(Errc::InvalidArgument, "section_rotation: bad arguments");
  auto field = [&sym](const State& s) { return sym.hamilton_field(s); };
  auto phase = [&](const State& s) {
    const State v = field(s);
    return std::atan2(s[transverse_coord], v[transverse_coord]);
  };
  State y = p0.to_state();
  const double x_start = y[angle_coord];
  const double dir = field(y)[angle_coord] >= 0.0 ? 1.0 : -1.0;
  double t = 0.0;
  double ph = phase(y);
  int next = 1;
  std::vector<double> advances;
  std::vector<double> times;
  double last_t = 0.0;
  double last_ph = ph;
  const long max_steps = long(1e8);
  for (long step = 0; step < max_steps && next <= n_returns; ++step) {
    State y1 = gbs_step(field, y, dt);
    if (!y1.allFinite()) throw Error(Errc::StepRejected, "non-finite state in section_rotation");
    double ph1 = phase(y1);
    ph1 = ph + angle_diff(ph1, ph);
    const double target = x_start + dir * kTwoPi * next;
    if (dir * (y1[angle_coord] - target) >= 0.0) {
      // Refine the crossing time inside this step by the secant method on
      // sub-steps taken from y.
      double a = 0.0, b = dt;
      double fa = dir * (y[angle_coord] - target);
      double fb = dir * (y1[angle_coord] - target);
      double tau = b;
      State yc = y1;
      for (int it = 0; it < 60; ++it) {
        tau = (fb == fa) ? 0.5 * (a + b) : b - fb * (b - a) / (fb - fa);
        if (!(tau > a && tau < b)) tau = 0.5 * (a + b);
        yc = gbs_step(field, y, tau);
        const double fc = dir * (yc[angle_coord] - target);
        if (std::abs(fc) < 1e-14 || (b - a) < 1e-15) break;
        if (fc < 0.0) {
          a = tau;
          fa = fc;
        } else {
          b = tau;
          fb = fc;
        }
      }
      double phc = ph + angle_diff(phase(yc), ph);
      advances.push_back(phc - last_ph);
      times.push_back(t + tau - last_t);
      last_ph = phc;
      last_t = t + tau;
      ++next;
    }
    y = y1;
    ph = ph1;
    t += dt;
  }
  if (advances.empty()) throw Error(Errc::NumericalFailure, "section_rotation: no return found");
  SectionRotation r;
  r.returns = int(advances.size());
  double mean = 0.0, mt = 0.0;
  for (std::size_t i = 0; i < advances.size(); ++i) {
    mean += advances[i];
    mt += times[i];
  }
  mean /= advances.size();
  mt /= advances.size();
  double spread = 0.0;
  for (double a : advances) spread = std::max(spread, std::abs(a - mean));
  r.advance = mean;
  r.spread = spread;
  r.mean_return_time = mt;
  return r;
}

}  // namespace mjsc
