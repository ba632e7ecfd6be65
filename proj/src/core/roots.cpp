#include "mjsc/roots.hpp"

#include "mjsc/core.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cstdint>

namespace mjsc {

double bracketed_root(const std::function<double(double)>& f, double a, double b) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw Error(Errc::NumericalFailure, "root not bracketed");
  std::uintmax_t iters = 200;
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (lo + hi);
}

std::optional<double> ray_root(const std::function<double(double)>& f, double r0, double r_max) {
  const double f0 = f(0.0);
  if (!(f0 < 0.0)) return std::nullopt;
  double lo = 0.0;
  double r = r0;
  while (r <= r_max) {
    const double fr = f(r);
    if (!std::isfinite(fr)) return std::nullopt;
    if (fr >= 0.0) return bracketed_root(f, lo, r);
    lo = r;
    r *= 2.0;
  }
  return std::nullopt;
}

}  // namespace mjsc
