#include "mjsc/kam.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

namespace mjsc {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

Eigen::Vector2d FrequencyMap::frequency(const Eigen::Vector2d& I) const {
  if (omega_fn) return omega_fn(I);
  const double s = 1e-6;
  Eigen::Vector2d w;
  for (int j = 0; j < 2; ++j) {
    Eigen::Vector2d p = I, m = I;
    p[j] += s;
    m[j] -= s;
    w[j] = (H(p) - H(m)) / (2 * s);
  }
  return w;
}

FrequencyMap FrequencyMap::build(std::function<double(const Eigen::Vector2d&)> H,
                                 std::function<Eigen::Vector2d(const Eigen::Vector2d&)> omega_fn,
                                 std::vector<double> axis1, std::vector<double> axis2) {
  FrequencyMap fm;
  fm.H = std::move(H);
  fm.omega_fn = std::move(omega_fn);
  fm.axis1 = std::move(axis1);
  fm.axis2 = std::move(axis2);
  fm.omega.reserve(fm.axis1.size() * fm.axis2.size());
  for (double a : fm.axis1)
    for (double b : fm.axis2) {
      const Eigen::Vector2d w = fm.frequency({a, b});
      if (!w.allFinite()) throw Error(Errc::NumericalFailure, "frequency map not finite on grid");
      fm.omega.push_back(w);
    }
  return fm;
}

namespace {

std::optional<std::size_t> grid_index(const std::vector<double>& axis, double v) {
  for (std::size_t i = 0; i < axis.size(); ++i)
    if (std::abs(axis[i] - v) <= 1e-9 * std::max(1.0, std::abs(v))) return i;
  return std::nullopt;
}

}  // namespace

double isoenergetic_det(const FrequencyMap& fm, const Eigen::Vector2d& I) {
  const auto i = grid_index(fm.axis1, I[0]);
  const auto j = grid_index(fm.axis2, I[1]);
  if (!i || !j || *i == 0 || *j == 0 || *i + 1 >= fm.axis1.size() || *j + 1 >= fm.axis2.size())
    throw Error(Errc::GridTooCoarse, "action point has no 4-neighborhood on the grid");
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  const double d1 = fm.axis1[*i + 1] - fm.axis1[*i - 1];
  const double d2 = fm.axis2[*j + 1] - fm.axis2[*j - 1];
  M.block<2, 1>(0, 0) = (fm.omega_at(*i + 1, *j) - fm.omega_at(*i - 1, *j)) / d1;
  M.block<2, 1>(0, 1) = (fm.omega_at(*i, *j + 1) - fm.omega_at(*i, *j - 1)) / d2;
  const Eigen::Vector2d w = fm.omega_at(*i, *j);
  M.block<2, 1>(0, 2) = w;
  M.block<1, 2>(2, 0) = w.transpose();
  return M.determinant();
}

RotationProfile RotationProfile::from_fprime(std::vector<double> mu, std::vector<double> fprime) {
  if (mu.size() != fprime.size() || mu.size() < 2)
    throw Error(Errc::InvalidArgument, "profile needs matching mu and fprime of length >= 2");
  RotationProfile p;
  p.mu = std::move(mu);
  p.fprime = std::move(fprime);
  return p;
}

std::vector<double> chebyshev_nodes(double w, int n) {
  if (n < 3 || n % 2 == 0) throw Error(Errc::InvalidArgument, "chebyshev_nodes: n must be odd and >= 3");
  std::vector<double> x(n);
  for (int j = 0; j < n; ++j) x[j] = -w * std::cos(kPi * j / (n - 1));
  x[(n - 1) / 2] = 0.0;
  return x;
}

std::vector<double> chebyshev_derivative(const std::vector<double>& v, double w) {
  const int n = int(v.size());
  const auto x = chebyshev_nodes(w, n);
  std::vector<double> bw(n);
  for (int j = 0; j < n; ++j) bw[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == n - 1) ? 0.5 : 1.0);
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = (bw[j] / bw[i]) / (x[i] - x[j]);
      out[i] += d * v[j];
      diag -= d;
    }
    out[i] += diag * v[i];
  }
  return out;
}

RotationProfile rotation_profile(const FrequencyMap& fm, double calE, const Eigen::Vector2d& center,
                                 double half_width, int n) {
  const Eigen::Vector2d w0 = fm.frequency(center);
  if (std::abs(w0[1]) < 1e-12)
    throw Error(Errc::ImplicitSolveFailed, "omega_2 vanishes at the center");
  RotationProfile p;
  p.mu = chebyshev_nodes(half_width, n);
  p.f.assign(n, 0.0);
  p.fprime.assign(n, 0.0);
  const int m = (n - 1) / 2;

  auto solve = [&](int i, double guess) {
    double f = guess;
    for (int it = 0; it < 60; ++it) {
      const Eigen::Vector2d I(center[0] + p.mu[i], center[1] + f);
      const double F = fm.H(I) - calE;
      const double dF = fm.frequency(I)[1];
      if (std::abs(dF) < 1e-14) break;
      const double step = F / dF;
      f -= step;
      if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(f))) {
        const Eigen::Vector2d J(center[0] + p.mu[i], center[1] + f);
        const Eigen::Vector2d w = fm.frequency(J);
        p.f[i] = f;
        p.fprime[i] = -w[0] / w[1];
        return;
      }
    }
    throw Error(Errc::ImplicitSolveFailed, "Newton failed at mu = " + std::to_string(p.mu[i]));
  };
  solve(m, 0.0);
  for (int i = m + 1; i < n; ++i) solve(i, p.f[i - 1] + p.fprime[i - 1] * (p.mu[i] - p.mu[i - 1]));
  for (int i = m - 1; i >= 0; --i) solve(i, p.f[i + 1] + p.fprime[i + 1] * (p.mu[i] - p.mu[i + 1]));
  const double f0 = p.f[m];
  for (double& v : p.f) v -= f0;

  const auto df = chebyshev_derivative(p.f, half_width);
  for (int i = 0; i < n; ++i) p.derivative_defect = std::max(p.derivative_defect, std::abs(df[i] - p.fprime[i]));
  p.fsecond_at_0 = chebyshev_derivative(p.fprime, half_width)[m];
  p.nondegenerate = std::abs(p.fsecond_at_0) >= 1e-10;
  return p;
}

void DiophantineParams::validate() const {
  if (!(dio_c > 0.0)) throw Error(Errc::InvalidArgument, "dio_c must be > 0");
  if (!(sigma > 1.0)) throw Error(Errc::InvalidArgument, "sigma must be > 1");
  if (q_max < 8) throw Error(Errc::InvalidArgument, "q_max must be >= 8");
}

double KamMask::accepted_fraction() const {
  if (accepted.empty()) return 0.0;
  return double(std::count(accepted.begin(), accepted.end(), char(1))) / accepted.size();
}

double resonance_constant(double sigma, int q_max) {
  double s = 0.0;
  for (int q = 1; q <= q_max; ++q) s += std::pow(double(q), 1.0 - sigma);
  return 2.0 * s;
}

namespace {

// Inverse of a strictly increasing piecewise-linear map (x -> y) at y.
double inverse_linear(const std::vector<double>& x, const std::vector<double>& y, double v) {
  if (v <= y.front()) return x.front();
  if (v >= y.back()) return x.back();
  const auto it = std::upper_bound(y.begin(), y.end(), v);
  const std::size_t k = std::size_t(it - y.begin());
  const double t = (v - y[k - 1]) / (y[k] - y[k - 1]);
  return x[k - 1] + t * (x[k] - x[k - 1]);
}

}  // namespace

KamMask kam_mask(const RotationProfile& profile, const DiophantineParams& params,
                 bool require_monotone) {
  params.validate();
  const auto& fp = profile.fprime;
  for (double v : fp)
    if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "fprime not finite");
  KamMask m;
  m.params = params;
  m.mu = profile.mu;
  m.fprime = fp;
  const std::size_t n = fp.size();
  m.accepted.assign(n, 1);
  m.nearest_p.assign(n, 0);
  m.nearest_q.assign(n, 1);
  m.distance.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int q = 1; q <= params.q_max; ++q) {
      const long p = std::lround(fp[i] * q);
      const double dist = std::abs(fp[i] - double(p) / q);
      const double width = params.dio_c / std::pow(double(q), params.sigma);
      if (dist < width) m.accepted[i] = 0;
      const double ratio = dist / width;
      if (ratio < best) {
        best = ratio;
        m.nearest_p[i] = p;
        m.nearest_q[i] = q;
        m.distance[i] = dist;
      }
    }
  }

  bool increasing = true, decreasing = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(fp[i] > fp[i - 1])) increasing = false;
    if (!(fp[i] < fp[i - 1])) decreasing = false;
  }
  if (!increasing && !decreasing) {
    m.status = MaskStatus::ProfileNotMonotone;
    if (require_monotone)
      throw Error(Errc::ProfileNotMonotone, "f' is not strictly monotone on the window");
    return m;
  }

  std::vector<double> mu = profile.mu;
  std::vector<double> y = fp;
  if (decreasing) {
    std::reverse(mu.begin(), mu.end());
    std::reverse(y.begin(), y.end());
  }
  const double lo = y.front(), hi = y.back();
  std::vector<std::pair<double, double>> strips;
  for (int q = 1; q <= params.q_max; ++q) {
    const double width = params.dio_c / std::pow(double(q), params.sigma);
    const long p0 = long(std::floor((lo - width) * q));
    const long p1 = long(std::ceil((hi + width) * q));
    for (long p = p0; p <= p1; ++p) {
      if (std::gcd(p, long(q)) != 1) continue;
      const double a = std::max(lo, double(p) / q - width);
      const double b = std::min(hi, double(p) / q + width);
      if (a < b) strips.emplace_back(a, b);
    }
  }
  std::sort(strips.begin(), strips.end());
  double measure = 0.0;
  std::size_t k = 0;
  while (k < strips.size()) {
    double a = strips[k].first, b = strips[k].second;
    ++k;
    while (k < strips.size() && strips[k].first <= b) b = std::max(b, strips[k++].second);
    measure += std::abs(inverse_linear(mu, y, b) - inverse_linear(mu, y, a));
  }
  m.complement_measure = measure;
  return m;
}

double stable_dimension_estimate(const KamMask& mask, double h, double delta) {
  if (!(h > 0.0) || !(delta > 0.0 && delta < 1.0))
    throw Error(Errc::InvalidArgument, "need h > 0 and 0 < delta < 1");
  return std::pow(h, delta - 2.0) * mask.accepted_measure();
}

void write_mask_csv(std::ostream& os, const KamMask& m) {
  os << "mu,fprime,accepted,nearest_resonance_p,q,distance\n";
  char buf[200];
  for (std::size_t i = 0; i < m.mu.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%ld,%d,%.17g\n", m.mu[i], m.fprime[i],
                  int(m.accepted[i]), m.nearest_p[i], m.nearest_q[i], m.distance[i]);
    os << buf;
  }
}

}  // namespace mjsc
