#ifndef MJSC_QUANTIZE_HPP
#define MJSC_QUANTIZE_HPP

#include "mjsc/bnf.hpp"
#include "mjsc/flow.hpp"
#include "mjsc/kam.hpp"
#include "mjsc/models.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mjsc {

struct MaslovData {
  std::vector<int> alpha;
  std::vector<double> I0;

  void validate(int d) const;
};

struct QuasiEnergy {
  std::array<int, 2> k{0, 0};
  /// Ladder argument k h - I0 - h alpha / 4 (sign of the shift per the table).
  std::array<double, 2> arg{0.0, 0.0};
  double energy = 0.0;
};

struct QuasiEnergyTable {
  int dim = 1;
  double h = 0.0;
  double delta = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  /// -1 for k h - I0 - h alpha / 4, +1 for the k h - I0 + h alpha / 4 variant.
  int shift_sign = -1;
  /// Lattice points passing the admissibility box, before the window filter.
  std::size_t admissible = 0;
  std::vector<QuasiEnergy> entries;
  bool empty_ladder = false;
};

using ActionPolynomial = std::function<double(std::span<const double> iota)>;

/// Evaluates an angle-free series (a normal form) at phi = 0.
ActionPolynomial as_action_polynomial(const FourierTaylorSeries& P);

struct LadderOptions {
  double c_adm = 1.0;
  /// Window center; P(0) when unset.
  std::optional<double> E;
  int shift_sign = -1;
};

/// E_k = P(k h - I0 - h alpha / 4) for |k h - I0|_inf <= c_adm h^delta,
/// filtered to [E - h^delta, E + h^delta], ordered by energy then k.
QuasiEnergyTable bs_energies(const ActionPolynomial& P, int dim, const MaslovData& maslov, double h,
                             double delta, const LadderOptions& opt = {});

double stable_count(const KamMask& mask, double h, double delta);

/// beta = 2 pi / (1 + alpha) on branch +1, 2 pi / (1 - alpha) on branch -1.
double katok_beta(double alpha, int branch);

/// p/q with q <= q_max and |x - p/q| <= tol, if any.
std::optional<std::pair<long, int>> near_rational(double x, double tol = 1e-9, int q_max = 20);

struct KatokRung {
  int m1 = 0;
  int m2 = 0;
  double h = 0.0;
  double energy = 1.0;
};

struct KatokLadder {
  int branch = 1;
  double alpha = 0.0;
  double beta = 0.0;
  double C_action = 0.0;
  double C_error = 0.0;
  int p_index = 1;
  std::vector<KatokRung> entries;
  int skipped_nonpositive = 0;
  std::string warning;
};

/// Unit-energy equator orbit of the given branch as a closed loop.
Loop katok_equator_loop(const KatokModel& model, int branch);

KatokLadder katok_ladder(const KatokModel& model, int branch, std::pair<int, int> m1_range,
                         std::pair<int, int> m2_range, int p_index = 1);

struct HarmonicLevels {
  double x_min = 0.0;
  double V_min = 0.0;
  double curvature = 0.0;
  std::vector<double> levels;
};

/// Harmonic levels k1 omega1(x*) + h sqrt(k1 omega1''(x*)) (n + 1/2) at the
/// bottom x* of the potential k1 omega1.
HarmonicLevels larmor_harmonic_levels(const LarmorReduction& red, double k1, double h, int count);

void write_ladder_csv(std::ostream& os, const QuasiEnergyTable& t);
void write_katok_csv(std::ostream& os, const KatokLadder& l);

}  // namespace mjsc

#endif
