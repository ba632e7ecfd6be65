#ifndef MJSC_SERIES_HPP
#define MJSC_SERIES_HPP

#include "mjsc/core.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

namespace mjsc {

/// Index of one Fourier-Taylor term: Fourier mode k in the angles, Taylor
/// multi-index a in the actions. Unused components (d = 1) are zero.
struct TermIndex {
  std::array<int, 2> k{0, 0};
  std::array<int, 2> a{0, 0};

  int degree() const { return a[0] + a[1]; }
  int mode_norm() const { return std::max(std::abs(k[0]), std::abs(k[1])); }
  bool angle_free() const { return k[0] == 0 && k[1] == 0; }

  std::uint32_t pack() const;
  static TermIndex unpack(std::uint32_t key);

  friend bool operator==(const TermIndex&, const TermIndex&) = default;
};

inline constexpr int kSeriesModeCap = 64;
inline constexpr int kSeriesDegreeCap = 12;

/// Truncated series  sum_{k,a} c_{k,a} e^{i<k,phi>} iota^a  on T^d x R^d.
///
/// Terms outside the truncation box (|k|_inf <= k_max, |a|_1 <= deg_max) are
/// dropped on insertion; that is the truncation rule for every arithmetic
/// operation. Coefficients are kept in a sparse map ordered by packed index,
/// which makes iteration order (and therefore floating-point summation order)
/// deterministic.
class FourierTaylorSeries {
 public:
  using Coeff = std::complex<double>;
  using TermMap = std::map<std::uint32_t, Coeff>;

  FourierTaylorSeries() : FourierTaylorSeries(2, 8, 8) {}
  FourierTaylorSeries(int dim, int k_max, int deg_max);

  static FourierTaylorSeries constant(int dim, int k_max, int deg_max, double value);
  /// The action coordinate iota_j as a series.
  static FourierTaylorSeries action(int dim, int k_max, int deg_max, int j);
  /// c * e^{i<k,phi>} * iota^a.
  static FourierTaylorSeries monomial(int dim, int k_max, int deg_max, TermIndex idx, Coeff c);
  /// c * cos(<k,phi>) * iota^a as the two conjugate exponentials.
  static FourierTaylorSeries cosine(int dim, int k_max, int deg_max, std::array<int, 2> k,
                                    std::array<int, 2> a, double c);
  static FourierTaylorSeries sine(int dim, int k_max, int deg_max, std::array<int, 2> k,
                                  std::array<int, 2> a, double c);

  int dim() const { return dim_; }
  int k_max() const { return k_max_; }
  int deg_max() const { return deg_max_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  bool admits(const TermIndex& idx) const;
  /// Adds c to the coefficient at idx; silently dropped if outside the box.
  void add_term(const TermIndex& idx, Coeff c);
  Coeff coefficient(const TermIndex& idx) const;

  template <class F>
  void for_each(F&& f) const {
    for (const auto& [key, c] : terms_) f(TermIndex::unpack(key), c);
  }

  /// Real part of the series at (phi, iota); the fast path used everywhere.
  double eval(std::span<const double> phi, std::span<const double> iota) const;
  Coeff eval_complex(std::span<const double> phi, std::span<const double> iota) const;
  /// Term-by-term summation with std::exp/std::pow, for cross-checking eval.
  Coeff eval_naive(std::span<const double> phi, std::span<const double> iota) const;
  /// Gradient of the real part: (d/dphi_1..d, d/diota_1..d).
  State gradient(std::span<const double> phi, std::span<const double> iota) const;

  /// Largest |c_{-k,a} - conj(c_{k,a})| over all terms.
  double reality_defect() const;
  bool is_real(double tol = 1e-12) const { return reality_defect() <= tol; }

  int max_degree() const;
  int min_degree() const;
  int max_mode() const;

  FourierTaylorSeries angle_average() const;
  FourierTaylorSeries angle_dependent() const;
  FourierTaylorSeries degree_part(int m) const;
  FourierTaylorSeries degree_range(int lo, int hi) const;
  FourierTaylorSeries truncated(int k_max, int deg_max) const;
  /// Same terms under a larger (or smaller) truncation box.
  FourierTaylorSeries with_caps(int k_max, int deg_max) const;
  /// Drops terms with |c| <= tol.
  FourierTaylorSeries chopped(double tol) const;

  FourierTaylorSeries d_angle(int j) const;
  FourierTaylorSeries d_action(int j) const;

  FourierTaylorSeries& operator+=(const FourierTaylorSeries& o);
  FourierTaylorSeries& operator-=(const FourierTaylorSeries& o);
  FourierTaylorSeries& operator*=(Coeff s);

  friend FourierTaylorSeries operator+(FourierTaylorSeries a, const FourierTaylorSeries& b) {
    return a += b;
  }
  friend FourierTaylorSeries operator-(FourierTaylorSeries a, const FourierTaylorSeries& b) {
    return a -= b;
  }
  friend FourierTaylorSeries operator*(FourierTaylorSeries a, Coeff s) { return a *= s; }
  friend FourierTaylorSeries operator*(Coeff s, FourierTaylorSeries a) { return a *= s; }

  /// Largest |c| over all terms (0 for the empty series).
  double max_abs() const;

 private:
  int dim_;
  int k_max_;
  int deg_max_;
  TermMap terms_;
};

/// Truncated Cauchy product; the result box is the smaller of the two.
FourierTaylorSeries multiply(const FourierTaylorSeries& f, const FourierTaylorSeries& g);

/// {f, g} = sum_j (d_iota_j f d_phi_j g - d_phi_j f d_iota_j g).
FourierTaylorSeries poisson(const FourierTaylorSeries& f, const FourierTaylorSeries& g);

inline FourierTaylorSeries angle_average(const FourierTaylorSeries& f) { return f.angle_average(); }
inline FourierTaylorSeries truncate(const FourierTaylorSeries& f, int k_max, int deg_max) {
  return f.truncated(k_max, deg_max);
}

/// F o Phi^1_g, the time-one map of X_g, as the Lie series sum_n D^n F / n!
/// with D F = {g, F}. Terminates when a term vanishes or n exceeds deg_max.
FourierTaylorSeries lie_transform(const FourierTaylorSeries& g, const FourierTaylorSeries& f);

/// Text form used by config files and BNF exports: one term per line,
/// "k1 k2 a1 a2 re im"; '#' starts a comment. The header line
/// "fourier_taylor d k_max deg_max" is required.
void write_series(std::ostream& os, const FourierTaylorSeries& s);
FourierTaylorSeries read_series(std::istream& is);

}  // namespace mjsc

#endif
