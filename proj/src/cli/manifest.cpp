#include "config_internal.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

#ifndef MJSC_VERSION
#define MJSC_VERSION "unknown"
#endif

namespace mjsc {

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::NumericalFailure, "SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

int exit_code_for(const Error& e) { return e.code() == Errc::ConfigInvalid ? 2 : 3; }

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw Error(Errc::NumericalFailure, "cannot write '" + p.string() + "'");
}

}  // namespace

void validate_config_file(const std::filesystem::path& config) { (void)cli::parse_config(config); }

RunManifest run_config_file(const std::filesystem::path& config,
                            const std::optional<std::filesystem::path>& output_root) {
  RunManifest man;
  man.started = utc_now();
  const cli::ParsedConfig cfg = cli::parse_config(config);
  man.experiment = cfg.kind;
  man.config_path = config.string();
  man.config_hash = sha256_hex(cfg.text);
  man.tool_version = MJSC_VERSION;
  man.seed = cfg.seed;

  cli::RunResult res = cfg.plan();
  man.steps = res.steps;
  man.steps.emplace_back(cfg.kind, "ok");

  std::filesystem::path root = std::filesystem::current_path();
  if (output_root) {
    root = *output_root;
  } else if (const char* env = std::getenv("MJSC_OUTPUT_ROOT"); env && *env) {
    root = env;
  }
  man.output_dir = root / cfg.output;
  std::filesystem::create_directories(man.output_dir);

  res.files.push_back({"summary.json", res.summary.dump(2) + "\n"});
  for (const auto& a : res.files) {
    write_file(man.output_dir / a.file, a.content);
    man.outputs.push_back({a.file, sha256_hex(a.content), std::uintmax_t(a.content.size())});
  }
  man.finished = utc_now();

  nlohmann::ordered_json j;
  j["experiment"] = man.experiment;
  j["config_path"] = man.config_path;
  j["config_sha256"] = man.config_hash;
  j["tool_version"] = man.tool_version;
  j["seed"] = man.seed;
  j["started"] = man.started;
  j["finished"] = man.finished;
  j["steps"] = nlohmann::ordered_json::array();
  for (const auto& [step, status] : man.steps) j["steps"].push_back({{"step", step}, {"status", status}});
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : man.outputs) j["outputs"].push_back({{"file", o.file}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  write_file(man.output_dir / "manifest.json", j.dump(2) + "\n");
  return man;
}

}  // namespace mjsc
