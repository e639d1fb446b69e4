#include <CLI11.hpp>
#include <cstdio>

#include "ycl/errors.hpp"
#include "ycl/experiments.hpp"
#include "ycl/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Periodic-torus laboratory for screened mean-field crystals with defects"};
  app.set_version_flag("--version", ycl::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "config file (key = value sections)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--set", overrides, "override a key as section.key=value")
      ->take_all();

  auto* validate = app.add_subcommand("validate", "Validate a config without running");
  validate->add_option("config", config_path, "config file")->required()->check(
      CLI::ExistingFile);
  validate->add_option("--set", overrides, "override a key as section.key=value")->take_all();

  auto* list = app.add_subcommand("list-experiments", "List runnable experiments");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : ycl::list_experiments()) std::printf("%s\n", name.c_str());
      return 0;
    }
    const ycl::ExperimentConfig cfg = ycl::ExperimentConfig::from_file(config_path, overrides);
    if (validate->parsed()) {
      ycl::validate_experiment(cfg);
      std::printf("ok: experiment '%s'\n", cfg.experiment.c_str());
      return 0;
    }
    const ycl::RunResult result = ycl::run_experiment(cfg);
    if (result.exit_code == 0) {
      std::printf("ok: outputs in %s\n", result.output_directory.string().c_str());
    } else {
      std::fprintf(stderr, "error [%s]: %s\n", result.error_code.c_str(),
                   result.message.c_str());
    }
    return result.exit_code;
  } catch (const ycl::Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", ycl::error_code_name(e.code()), e.what());
    return e.code() == ycl::ErrorCode::config_invalid ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
