#include "mjsc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical experiment runner"};
  app.require_subcommand(1);

  std::string config;
  std::string output_root;
  auto* run = app.add_subcommand("run", "run the experiment described by a YAML config");
  run->add_option("config", config, "config file")->required();
  run->add_option("--output-root", output_root, "directory that receives <output>/ (overrides MJSC_OUTPUT_ROOT)");
  auto* validate = app.add_subcommand("validate", "check a config without running it");
  validate->add_option("config", config, "config file")->required();
  app.add_subcommand("list", "print the experiment catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      mjsc::print_catalog(std::cout);
    } else if (app.got_subcommand("validate")) {
      mjsc::validate_config_file(config);
      std::cout << config << ": ok\n";
    } else {
      std::optional<std::filesystem::path> root;
      if (!output_root.empty()) root = output_root;
      const auto man = mjsc::run_config_file(config, root);
      std::cout << man.experiment << ": wrote " << man.outputs.size() << " files to " << man.output_dir.string()
                << '\n';
    }
  } catch (const mjsc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mjsc::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
