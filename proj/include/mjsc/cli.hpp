#ifndef MJSC_CLI_HPP
#define MJSC_CLI_HPP

#include "mjsc/flow.hpp"
#include "mjsc/models.hpp"
#include "mjsc/spectra.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mjsc {

struct ExperimentInfo {
  std::string kind;
  std::string summary;
  std::vector<std::string> required;
};

/// The eleven experiment kinds, in a fixed order.
const std::vector<ExperimentInfo>& experiment_catalog();
void print_catalog(std::ostream& os);
/// Closest catalog kind by edit distance, or empty if nothing is close.
std::string suggest_kind(std::string_view kind);

std::string sha256_hex(std::string_view bytes);

struct OutputRecord {
  std::string file;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string experiment;
  std::string config_path;
  std::string config_hash;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string started;
  std::string finished;
  std::filesystem::path output_dir;
  std::vector<std::pair<std::string, std::string>> steps;
  std::vector<OutputRecord> outputs;
};

/// Parses the config and checks every parameter and the model block
/// without running anything; throws Error(ConfigInvalid).
void validate_config_file(const std::filesystem::path& config);

/// Runs one experiment. Outputs go to <root>/<output>, where root is
/// output_root, else $MJSC_OUTPUT_ROOT, else the current directory. Nothing
/// is written unless the experiment completes.
RunManifest run_config_file(const std::filesystem::path& config,
                            const std::optional<std::filesystem::path>& output_root = std::nullopt);

/// 2 for ConfigInvalid, 3 for every numerical error.
int exit_code_for(const Error& e);

// Experiment kernels shared by the runner and the acceptance suite.

struct OrbitCheck {
  std::uint64_t seed = 0;
  PhasePoint start;
  double orbit_distance = 0.0;
  double G_average = 0.0;
  double G_convergence = 0.0;
  std::vector<double> omega_calH;
  std::vector<double> omega_H;
  /// max_j |omega_calH_j - <G> omega_H_j| / max_j |omega_calH_j|.
  double omega_rel_error = 0.0;
  double drift_calH = 0.0;
  double drift_H = 0.0;
};

/// Random start on the shared surface, H-flow for t_end, calH-flow for the
/// matched time, then orbit-set distance and frequency rescaling.
OrbitCheck mj_orbit_check(const MjPair& pair, std::uint64_t seed, double t_end = 200.0, double dt = 0.02,
                          int stride = 5);

/// Bundled observables for the trace test: {1, cos x1, xi1^2, xi1^2 cos x2,
/// cos(x1 + x2)} and the time-reversal-odd {xi1, xi1 cos x1, xi2 sin x1}.
std::vector<SymbolField> trace_observables();
std::vector<SymbolField> odd_observables();

struct SpectralStudyOptions {
  double E = 1.0;
  double delta = 0.5;
  /// 0 selects ceil(R / h) + 10 with R the largest momentum on {H = E + h^delta}.
  int n_max = 0;
  int n_max_cap = 34;
  /// Coefficient of e^{+-i x1} in the symbol, for the band commutator bound.
  double lambda = 0.05;
  double I1 = 0.0;
  double mass_floor = 0.1;
  PairingPolicy policy;
  bool pairing = true;
  bool projector = true;
  bool trace = true;
  /// Sectors (theta1, theta3) for Husimi masses; none when unset.
  std::optional<std::pair<double, double>> partition;
};

struct NamedAverage {
  std::string name;
  ObservableAverage value;
};

struct SpectralStudy {
  double h = 0.0;
  int n_max = 0;
  SpectralWindow<double> window;
  double eigen_residual = 0.0;
  std::optional<PairingReport> pairing;
  double gs_max_residual = 0.0;
  double commutator = 0.0;
  double commutator_bound = 0.0;
  double integrable_commutator = 0.0;
  std::vector<NamedAverage> even;
  std::vector<NamedAverage> odd;
  std::optional<HusimiReport> husimi;

  double worst_even_gap() const;
  double worst_odd_mean() const;
};

int auto_n_max(const SymbolField& H, double E, double h, double delta);

SpectralStudy spectral_study(const SymbolField& H, double h, const SpectralStudyOptions& opt);

}  // namespace mjsc

#endif
