#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ycl/crystal.hpp"

namespace ycl {

// Declarative key = value sections; '#' and ';' start comments. CLI flags
// override any key through a dotted path ("section.key=value").
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::filesystem::path& path);
  static ConfigFile parse_string(const std::string& text);

  void set(const std::string& section, const std::string& key, const std::string& value);
  void apply_override(const std::string& dotted_assignment);  // "a.b=c"

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const;
  const std::map<std::string, std::map<std::string, std::string>>& sections() const {
    return sections_;
  }

  std::string render() const;  // canonical echo for manifests

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Typed view of a parsed config. Construction validates the model and solver
// blocks and rejects unknown sections and keys; experiment-specific keys are
// validated by the experiment registry.
struct ExperimentConfig {
  // model
  int dim = 1;
  int cells = 32;
  int points_per_cell = 16;
  double mass = 1.0;
  double nu_amplitude = 4.0;
  double nu_width = 0.1;
  int electrons_per_cell = 1;
  double defect_amplitude = 0.2;
  double defect_width = 0.1;

  ScfOptions solver;

  std::string experiment;
  std::map<std::string, std::string> params;  // experiment block minus "name"

  std::filesystem::path output_directory = "out";
  std::set<std::string> formats = {"csv", "json", "bin"};

  std::uint64_t seed = 1;

  ConfigFile raw;  // canonical echo

  static ExperimentConfig from_config(const ConfigFile& file);
  static ExperimentConfig from_file(const std::filesystem::path& path,
                                    const std::vector<std::string>& overrides = {});

  CrystalSpec crystal() const;

  // Typed access to experiment params with config_invalid diagnostics.
  bool param_present(const std::string& key) const;
  std::string param(const std::string& key, const std::string& fallback) const;
  double param_double(const std::string& key, double fallback) const;
  int param_int(const std::string& key, int fallback) const;
  std::vector<int> param_int_list(const std::string& key, const std::vector<int>& fallback) const;
  std::vector<double> param_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;
};

}  // namespace ycl
