#include "mjsc/flow.hpp"

#include <boost/math/tools/minima.hpp>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <complex>
#include <limits>

namespace mjsc {

double reparam_factor(const MjPair& pair, const PhasePoint& p, double surface_tol,
                      double parallel_tol) {
  const double dev = std::abs(pair.H.eval(p) - pair.E);
  if (dev > surface_tol)
    throw Error(Errc::NotOnSurface, "|H - E| = " + std::to_string(dev));
  const State s = p.to_state();
  const State xh = pair.H.hamilton_field(s);
  const State xc = pair.calH.hamilton_field(s);
  const double n2 = xh.squaredNorm();
  if (n2 == 0.0) throw Error(Errc::MultiplierSingular, "X_H vanishes");
  const double r = xc.dot(xh) / n2;
  const double res = (xc - r * xh).norm();
  if (res > parallel_tol * xc.norm())
    throw Error(Errc::FieldsNotParallel, "residual " + std::to_string(res));
  return r;
}

double bump_weight(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (s * (1.0 - s)));
}

double weighted_average(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = bump_weight((i + 0.5) / n);
    num += w * v[i];
    den += w;
  }
  return num / den;
}

namespace {

double trapezoid_mean(std::span<const double> t, std::span<const double> f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return s / (t.back() - t.front());
}

}  // namespace

TimeAverage average_reparam(const MjPair& pair, const Trajectory& traj, AverageKind kind) {
  if (traj.size() < 4) throw Error(Errc::InvalidArgument, "average_reparam: trajectory too short");
  std::vector<double> g(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) g[i] = reparam_factor(pair, traj.points[i]);
  const std::size_t half = traj.size() / 2 + 1;
  TimeAverage out;
  double half_value = 0.0;
  if (kind == AverageKind::Trapezoid) {
    out.value = trapezoid_mean(traj.times, g);
    half_value = trapezoid_mean(std::span(traj.times).first(half), std::span<const double>(g).first(half));
  } else {
    out.value = weighted_average(g);
    half_value = weighted_average(std::span<const double>(g).first(half));
  }
  out.convergence = std::abs(out.value - half_value);
  return out;
}

RotationEstimate rotation_number(const Trajectory& traj) {
  if (traj.size() < 8) throw Error(Errc::InsufficientWinding, "trajectory too short");
  const int d = traj.points.front().d;
  // Drop a trailing short interval so the samples are equally spaced.
  std::size_t n = traj.size();
  const double dt0 = traj.times[1] - traj.times[0];
  if (std::abs((traj.times[n - 1] - traj.times[n - 2]) - dt0) > 1e-9 * dt0) --n;
  RotationEstimate est;
  est.omega.assign(d, 0.0);
  est.window = int(n - 1);
  for (int j = 0; j < d; ++j) {
    if (!traj.points.front().is_angle(j)) continue;
    std::vector<double> rate(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      rate[i] = angle_diff(traj.points[i + 1].x[j], traj.points[i].x[j]) /
                (traj.times[i + 1] - traj.times[i]);
    const double full = weighted_average(rate);
    const double half = weighted_average(std::span<const double>(rate).first(rate.size() / 2));
    est.omega[j] = full;
    est.confidence = std::max(est.confidence, std::abs(full - half));
  }
  double wmax = 0.0;
  for (double w : est.omega) wmax = std::max(wmax, std::abs(w));
  const double span = traj.times[n - 1] - traj.times.front();
  if (span * wmax < 100.0)
    throw Error(Errc::InsufficientWinding,
                "t_end |omega| = " + std::to_string(span * wmax) + " < 100");
  return est;
}

namespace {

double loop_integral(const Loop& loop, int N, int d, unsigned mask) {
  std::vector<PhasePoint> pts(N + 1);
  for (int i = 0; i <= N; ++i) pts[i] = loop(double(i) / N);
  double total = 0.0;
  Eigen::FFT<double> fft;
  for (int j = 0; j < d; ++j) {
    std::vector<double> lifted(N + 1);
    lifted[0] = pts[0].x[j];
    for (int i = 1; i <= N; ++i) {
      const double step = ((mask >> j) & 1u) ? angle_diff(pts[i].x[j], pts[i - 1].x[j])
                                              : pts[i].x[j] - pts[i - 1].x[j];
      lifted[i] = lifted[i - 1] + step;
    }
    const double winding = ((mask >> j) & 1u) ? std::round((lifted[N] - lifted[0]) / kTwoPi) : 0.0;
    std::vector<double> periodic(N);
    for (int i = 0; i < N; ++i) periodic[i] = lifted[i] - kTwoPi * winding * double(i) / N;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, periodic);
    for (int m = 0; m < N; ++m) {
      int k = m <= N / 2 ? m : m - N;
      if (2 * m == N) k = 0;  // Nyquist mode has no odd derivative
      spec[m] *= std::complex<double>(0.0, kTwoPi * k);
    }
    std::vector<double> deriv;
    fft.inv(deriv, spec);
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += pts[i].xi[j] * (deriv[i] + kTwoPi * winding);
    total += s / N;
  }
  return total;
}

}  // namespace

CycleAction action_integral(const Loop& loop, int cycle_id, bool checked) {
  const PhasePoint a = loop(0.0);
  const PhasePoint b = loop(1.0);
  const double gap = phase_distance(a, b);
  if (gap > 1e-8) throw Error(Errc::LoopNotClosed, "|p(0) - p(1)| = " + std::to_string(gap));
  CycleAction out;
  out.cycle_id = cycle_id;
  double prev = loop_integral(loop, 32, a.d, a.angle_mask);
  for (int N = 64; N <= 8192; N *= 2) {
    const double cur = loop_integral(loop, N, a.d, a.angle_mask);
    out.value = cur;
    out.quadrature_error = std::abs(cur - prev);
    out.samples = N;
    if (out.quadrature_error <= 1e-11 * std::max(1.0, std::abs(cur))) break;
    prev = cur;
  }
  if (checked && out.quadrature_error > 1e-8 * std::max(1.0, std::abs(out.value)))
    throw Error(Errc::NumericalFailure,
                "action quadrature did not converge: " + std::to_string(out.quadrature_error));
  return out;
}

namespace {

double wrapped_sq(const PhasePoint& a, const PhasePoint& b) {
  double s = 0.0;
  for (int j = 0; j < a.d; ++j) {
    double dx = std::abs(a.x[j] - b.x[j]);
    if (a.is_angle(j) && dx > kPi) dx = kTwoPi - dx;
    const double dp = a.xi[j] - b.xi[j];
    s += dx * dx + dp * dp;
  }
  return s;
}

// Distance from q to the degree-5 interpolant of b through the samples
// around index j, minimized over the local parameter.
double refined_distance(const PhasePoint& q, const Trajectory& b, std::size_t j) {
  const std::size_t n = b.size();
  if (n < 6) return std::sqrt(wrapped_sq(q, b.points[j]));
  std::size_t lo = j >= 2 ? j - 2 : 0;
  if (lo + 6 > n) lo = n - 6;
  const int d = q.d;
  const PhasePoint& ref = b.points[j];
  std::array<std::array<double, 4>, 6> nodes{};  // unwrapped coordinates relative to ref
  std::array<double, 6> t{};
  for (int m = 0; m < 6; ++m) {
    const PhasePoint& p = b.points[lo + m];
    t[m] = b.times[lo + m] - b.times[j];  // local parameter keeps Brent's relative tolerance meaningful
    for (int c = 0; c < d; ++c) {
      nodes[m][c] = p.is_angle(c) ? angle_diff(p.x[c], ref.x[c]) : p.x[c] - ref.x[c];
      nodes[m][d + c] = p.xi[c] - ref.xi[c];
    }
  }
  std::array<double, 4> qrel{};
  for (int c = 0; c < d; ++c) {
    qrel[c] = q.is_angle(c) ? angle_diff(q.x[c], ref.x[c]) : q.x[c] - ref.x[c];
    qrel[d + c] = q.xi[c] - ref.xi[c];
  }
  auto dist2 = [&](double s) {
    double out = 0.0;
    for (int c = 0; c < 2 * d; ++c) {
      double v = 0.0;
      for (int m = 0; m < 6; ++m) {
        double l = 1.0;
        for (int r = 0; r < 6; ++r)
          if (r != m) l *= (s - t[r]) / (t[m] - t[r]);
        v += l * nodes[m][c];
      }
      const double e = v - qrel[c];
      out += e * e;
    }
    return out;
  };
  const double a = b.times[j > 0 ? j - 1 : 0] - b.times[j];
  const double c = b.times[std::min(j + 1, n - 1)] - b.times[j];
  auto [s, f] = boost::math::tools::brent_find_minima(dist2, a, c, 50);
  (void)s;
  return std::sqrt(std::min(f, wrapped_sq(q, b.points[j])));
}

double directed_distance(const Trajectory& a, const Trajectory& b) {
  // Largest gap between consecutive samples of b; any sample within this
  // margin of the nearest one may sit on the pass that is truly closest.
  double step = 0.0;
  for (std::size_t j = 1; j < b.size(); ++j) step = std::max(step, wrapped_sq(b.points[j - 1], b.points[j]));
  step = std::sqrt(step);
  std::vector<double> s(b.size());
  double worst = 0.0;
  for (const auto& q : a.points) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      s[j] = wrapped_sq(q, b.points[j]);
      best = std::min(best, s[j]);
    }
    if (std::sqrt(best) <= worst) continue;
    const double reach = std::sqrt(best) + step;
    double local = std::sqrt(best);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (std::sqrt(s[j]) > reach) continue;
      const bool left = j == 0 || s[j - 1] >= s[j];
      const bool right = j + 1 == b.size() || s[j + 1] >= s[j];
      if (left && right) local = std::min(local, refined_distance(q, b, j));
    }
    worst = std::max(worst, local);
  }
  return worst;
}

}  // namespace

double directed_orbit_distance(const Trajectory& a, const Trajectory& b) {
  if (a.empty() || b.empty()) throw Error(Errc::InvalidArgument, "orbit distance: empty trajectory");
  return directed_distance(a, b);
}

double orbit_set_distance(const Trajectory& a, const Trajectory& b) {
  if (a.empty() || b.empty()) throw Error(Errc::InvalidArgument, "orbit_set_distance: empty trajectory");
  return std::max(directed_distance(a, b), directed_distance(b, a));
}

double matched_calH_time(const MjPair& pair, const Trajectory& h_traj) {
  const std::size_t n = h_traj.size();
  if (n < 4) throw Error(Errc::InvalidArgument, "matched_calH_time: trajectory too short");
  std::vector<double> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = 1.0 / reparam_factor(pair, h_traj.points[i]);
  const double h = h_traj.times[1] - h_traj.times[0];
  const bool uniform = std::abs((h_traj.times[n - 1] - h_traj.times[n - 2]) - h) <= 1e-9 * h;
  if (!uniform) {
    double s = 0.0;
    for (std::size_t i = 1; i < n; ++i)
      s += 0.5 * (inv[i] + inv[i - 1]) * (h_traj.times[i] - h_traj.times[i - 1]);
    return s;
  }
  // Composite Simpson; an odd panel count ends with one 3/8 panel.
  const std::size_t intervals = n - 1;
  std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
    s += h / 3.0 * (inv[i] + 4.0 * inv[i + 1] + inv[i + 2]);
  if (simpson_end != intervals) {
    const std::size_t i = simpson_end;
    s += 3.0 * h / 8.0 * (inv[i] + 3.0 * inv[i + 1] + 3.0 * inv[i + 2] + inv[i + 3]);
  }
  return s;
}

}  // namespace mjsc
