#ifndef MJSC_FLOW_HPP
#define MJSC_FLOW_HPP

#include "mjsc/models.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mjsc {

struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<double> energies;
  double energy_drift = 0.0;
  std::string method;
  double dt = 0.0;
  int stride = 1;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
};

struct IntegrateOptions {
  bool checked = true;
  /// Checked mode throws if the drift exceeds drift_per_time * t_end.
  double drift_per_time = 1e-9;
  /// Keep every stride-th step (the final point is always kept).
  int stride = 1;
};

/// One fixed step of the 8th-order Gragg-Bulirsch-Stoer scheme (modified
/// midpoint with substeps 2, 4, 6, 8 and polynomial extrapolation in h^2).
State gbs_step(const std::function<State(const State&)>& f, const State& y, double h);

/// Hamilton flow of sym from p0 with fixed step dt up to t_end (dt < 0 integrates backward).
Trajectory integrate(const SymbolField& sym, const PhasePoint& p0, double t_end, double dt,
                     const IntegrateOptions& opt = {});

/// The lifted final state (angles not reduced), for reversibility checks.
State flow_map(const SymbolField& sym, const State& y0, double t, double dt);

/// G(p) with X_calH = G X_H, fitted by least squares.
double reparam_factor(const MjPair& pair, const PhasePoint& p, double surface_tol = 1e-6,
                      double parallel_tol = 1e-6);

enum class AverageKind { Trapezoid, Weighted };

struct TimeAverage {
  double value = 0.0;
  /// |full-window average - half-window average|.
  double convergence = 0.0;
};

/// Time average of G along a trajectory of the calH flow; with this
/// orientation omega_calH = <G> omega_H.
TimeAverage average_reparam(const MjPair& pair, const Trajectory& traj,
                            AverageKind kind = AverageKind::Trapezoid);

/// Exponential bump weight exp(-1/(s(1-s))) on (0, 1).
double bump_weight(double s);

/// Weighted Birkhoff average of samples taken at equal spacing.
double weighted_average(std::span<const double> samples);

struct RotationEstimate {
  std::vector<double> omega;
  double confidence = 0.0;
  int window = 0;
};

/// Frequencies of the angle coordinates of traj (other coordinates get 0).
RotationEstimate rotation_number(const Trajectory& traj);

struct CycleAction {
  int cycle_id = 0;
  double value = 0.0;
  double quadrature_error = 0.0;
  int samples = 0;
};

/// A closed loop s in [0, 1] -> (x, xi); angle coordinates may wind.
using Loop = std::function<PhasePoint(double s)>;

CycleAction action_integral(const Loop& loop, int cycle_id = 0, bool checked = true);

/// Symmetric Hausdorff distance between the two orbits, with the second
/// orbit's samples interpolated so that the result is not limited by the
/// sampling step.
double orbit_set_distance(const Trajectory& a, const Trajectory& b);
/// sup over samples of a of the distance to the orbit of b.
double directed_orbit_distance(const Trajectory& a, const Trajectory& b);

/// calH-time needed to cover the same arc as an H-trajectory: int dt / G.
double matched_calH_time(const MjPair& pair, const Trajectory& h_traj);

struct SectionRotation {
  /// Mean advance of the transverse phase atan2(x_t, dx_t/dt) per return.
  double advance = 0.0;
  double spread = 0.0;
  double mean_return_time = 0.0;
  int returns = 0;
};

/// Poincare section {x_j = 0 mod 2pi}: transverse rotation per return.
SectionRotation section_rotation(const SymbolField& sym, const PhasePoint& p0, int angle_coord,
                                 int transverse_coord, int n_returns, double dt);

void write_trajectory_csv(std::ostream& os, const Trajectory& t);

/// Binary cache keyed by (model hash, seed, dt, t_end).
struct TrajectoryKey {
  std::string model_hash;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double t_end = 0.0;

  std::string file_name() const;
};

void save_trajectory_cache(const std::filesystem::path& dir, const TrajectoryKey& key,
                           const Trajectory& t);
std::optional<Trajectory> load_trajectory_cache(const std::filesystem::path& dir,
                                                const TrajectoryKey& key);

}  // namespace mjsc

#endif
