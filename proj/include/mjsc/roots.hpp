#ifndef MJSC_ROOTS_HPP
#define MJSC_ROOTS_HPP

#include <functional>
#include <optional>

namespace mjsc {

/// Root of f on [a, b] with f(a) f(b) <= 0, to about 1e-15 relative.
double bracketed_root(const std::function<double(double)>& f, double a, double b);

/// Smallest positive r with f(r) = 0, given f(0) < 0: doubles r from r0
/// until the sign changes (giving up past r_max), then refines.
std::optional<double> ray_root(const std::function<double(double)>& f, double r0 = 0.25,
                               double r_max = 1e3);

}  // namespace mjsc

#endif
