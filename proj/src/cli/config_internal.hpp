#ifndef MJSC_CLI_CONFIG_INTERNAL_HPP
#define MJSC_CLI_CONFIG_INTERNAL_HPP

#include "mjsc/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <json.hpp>

#include <functional>
#include <set>

namespace mjsc::cli {

/// Strict view of one YAML mapping: every key must be read exactly through
/// the typed getters, and finish() rejects keys nobody asked for.
class Section {
 public:
  Section(YAML::Node node, std::string path);

  bool has(const std::string& key) const;
  double real(const std::string& key);
  double real(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> reals(const std::string& key);
  std::vector<double> reals(const std::string& key, std::vector<double> fallback);
  std::vector<int> integers(const std::string& key);
  std::vector<int> integers(const std::string& key, std::vector<int> fallback);
  std::array<int, 2> int_pair(const std::string& key);
  std::array<double, 2> real_pair(const std::string& key);
  /// A list of mappings, each wrapped as its own Section.
  std::vector<Section> list(const std::string& key);
  Section child(const std::string& key);

  void finish() const;
  const std::string& path() const { return path_; }

 private:
  YAML::Node get(const std::string& key);
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

/// Positive reals and the like, with the key name in the message.
double positive(double v, const std::string& what);
void require(bool ok, const std::string& what);

struct Artifact {
  std::string file;
  std::string content;
};

struct RunResult {
  std::vector<Artifact> files;
  nlohmann::ordered_json summary;
  std::vector<std::pair<std::string, std::string>> steps;
};

using Plan = std::function<RunResult()>;

struct ParsedConfig {
  std::string kind;
  std::uint64_t seed = 0;
  std::string output;
  std::string text;
  Plan plan;
};

/// Reads, validates and binds everything; nothing numerical runs here.
ParsedConfig parse_config(const std::filesystem::path& path);

/// The model block; unknown kinds and keys throw ConfigInvalid.
struct ModelSpec {
  std::string kind;
  std::optional<MjPair> pair;
  std::optional<KatokModel> katok;
  std::optional<FourierTaylorSeries> series;
};
ModelSpec parse_model(Section model);

Plan make_plan(const std::string& kind, std::optional<Section> model, Section params, std::uint64_t seed);

std::string csv_real(double v);

}  // namespace mjsc::cli

#endif
