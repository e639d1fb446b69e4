#include "ycl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ycl/errors.hpp"

namespace ycl {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& where, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::config_invalid, where + ": cannot parse number '" + text + "'");
  }
}

int parse_int(const std::string& where, const std::string& text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(ErrorCode::config_invalid, where + ": cannot parse integer '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
  ConfigFile file;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrorCode::config_invalid,
             "config line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        fail(ErrorCode::config_invalid,
             "config line " + std::to_string(line_no) + ": empty section name");
      file.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::config_invalid,
           "config line " + std::to_string(line_no) + ": expected key = value");
    if (section.empty())
      fail(ErrorCode::config_invalid,
           "config line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(ErrorCode::config_invalid, "config line " + std::to_string(line_no) + ": empty key");
    file.sections_[section][key] = value;
  }
  return file;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_invalid, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

void ConfigFile::set(const std::string& section, const std::string& key,
                     const std::string& value) {
  sections_[section][key] = value;
}

void ConfigFile::apply_override(const std::string& dotted_assignment) {
  const auto eq = dotted_assignment.find('=');
  if (eq == std::string::npos)
    fail(ErrorCode::config_invalid, "override '" + dotted_assignment + "': expected key=value");
  const std::string path = trim(dotted_assignment.substr(0, eq));
  const std::string value = trim(dotted_assignment.substr(eq + 1));
  const auto dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
    fail(ErrorCode::config_invalid, "override '" + dotted_assignment + "': expected section.key");
  set(path.substr(0, dot), path.substr(dot + 1), value);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return fallback;
  auto kv = it->second.find(key);
  return kv == it->second.end() ? fallback : kv->second;
}

std::string ConfigFile::render() const {
  std::ostringstream out;
  for (const auto& [section, keys] : sections_) {
    out << '[' << section << "]\n";
    for (const auto& [key, value] : keys) out << key << " = " << value << '\n';
  }
  return out.str();
}

ExperimentConfig ExperimentConfig::from_config(const ConfigFile& file) {
  static const std::map<std::string, std::set<std::string>> known = {
      {"model",
       {"dim", "cells", "points_per_cell", "mass", "nu_amplitude", "nu_width",
        "electrons_per_cell", "defect_amplitude", "defect_width"}},
      {"solver",
       {"tol_scf", "mixing", "gap_min", "max_iter", "krylov_tol", "krylov_max_iter",
        "max_dense_dim", "defect_gap_min", "divergence_window"}},
      {"experiment", {}},  // name + free-form params checked by the registry
      {"output", {"directory", "formats"}},
      {"random", {"seed"}},
  };
  for (const auto& [section, keys] : file.sections()) {
    auto it = known.find(section);
    if (it == known.end())
      fail(ErrorCode::config_invalid, "config: unknown section [" + section + "]");
    if (section == "experiment") continue;
    for (const auto& [key, value] : keys)
      if (!it->second.count(key))
        fail(ErrorCode::config_invalid, "config: unknown key " + section + "." + key);
  }

  ExperimentConfig cfg;
  cfg.raw = file;
  auto num = [&](const char* sec, const char* key, double fb) {
    const std::string v = file.get(sec, key, "");
    return v.empty() ? fb : parse_double(std::string(sec) + "." + key, v);
  };
  auto integer = [&](const char* sec, const char* key, int fb) {
    const std::string v = file.get(sec, key, "");
    return v.empty() ? fb : parse_int(std::string(sec) + "." + key, v);
  };

  cfg.dim = integer("model", "dim", cfg.dim);
  cfg.cells = integer("model", "cells", cfg.cells);
  cfg.points_per_cell = integer("model", "points_per_cell", cfg.points_per_cell);
  cfg.mass = num("model", "mass", cfg.mass);
  cfg.nu_amplitude = num("model", "nu_amplitude", cfg.nu_amplitude);
  cfg.nu_width = num("model", "nu_width", cfg.nu_width);
  cfg.electrons_per_cell = integer("model", "electrons_per_cell", cfg.electrons_per_cell);
  cfg.defect_amplitude = num("model", "defect_amplitude", cfg.defect_amplitude);
  cfg.defect_width = num("model", "defect_width", cfg.defect_width);

  cfg.solver.tol_scf = num("solver", "tol_scf", cfg.solver.tol_scf);
  cfg.solver.mixing = num("solver", "mixing", cfg.solver.mixing);
  cfg.solver.gap_min = num("solver", "gap_min", cfg.solver.gap_min);
  cfg.solver.max_iter = integer("solver", "max_iter", cfg.solver.max_iter);
  cfg.solver.krylov_tol = num("solver", "krylov_tol", cfg.solver.krylov_tol);
  cfg.solver.krylov_max_iter = integer("solver", "krylov_max_iter", cfg.solver.krylov_max_iter);
  cfg.solver.max_dense_dim = integer("solver", "max_dense_dim", cfg.solver.max_dense_dim);
  cfg.solver.defect_gap_min = num("solver", "defect_gap_min", cfg.solver.defect_gap_min);
  cfg.solver.divergence_window =
      integer("solver", "divergence_window", cfg.solver.divergence_window);

  auto exp_section = file.sections().find("experiment");
  if (exp_section == file.sections().end() || !exp_section->second.count("name"))
    fail(ErrorCode::config_invalid, "config: missing experiment.name");
  for (const auto& [key, value] : exp_section->second) {
    if (key == "name")
      cfg.experiment = value;
    else
      cfg.params[key] = value;
  }

  cfg.output_directory = file.get("output", "directory", cfg.output_directory.string());
  if (file.has("output", "formats")) {
    cfg.formats.clear();
    for (const auto& f : split_list(file.get("output", "formats", ""))) {
      if (f != "csv" && f != "json" && f != "bin")
        fail(ErrorCode::config_invalid, "config: unknown output format '" + f + "'");
      cfg.formats.insert(f);
    }
  }
  if (file.has("random", "seed")) {
    const std::string v = file.get("random", "seed", "");
    try {
      cfg.seed = std::stoull(v);
    } catch (const std::exception&) {
      fail(ErrorCode::config_invalid, "random.seed: cannot parse '" + v + "'");
    }
  }

  // Positivity of the physical parameters.
  cfg.crystal().validate();
  if (!(cfg.defect_amplitude >= 0))
    fail(ErrorCode::config_invalid, "model.defect_amplitude must be >= 0");
  if (!(cfg.defect_width > 0)) fail(ErrorCode::config_invalid, "model.defect_width must be > 0");
  if (!(cfg.solver.tol_scf > 0)) fail(ErrorCode::config_invalid, "solver.tol_scf must be > 0");
  if (!(cfg.solver.mixing > 0 && cfg.solver.mixing <= 1))
    fail(ErrorCode::config_invalid, "solver.mixing must be in (0,1]");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path,
                                             const std::vector<std::string>& overrides) {
  ConfigFile file = ConfigFile::parse_file(path);
  for (const auto& o : overrides) file.apply_override(o);
  return from_config(file);
}

CrystalSpec ExperimentConfig::crystal() const {
  CrystalSpec spec;
  spec.grid = TorusGrid{dim, cells, points_per_cell};
  spec.yukawa = YukawaParams{dim, mass};
  spec.nu_amplitude = nu_amplitude;
  spec.nu_width = nu_width;
  spec.electrons_per_cell = electrons_per_cell;
  return spec;
}

bool ExperimentConfig::param_present(const std::string& key) const {
  return params.count(key) > 0;
}

std::string ExperimentConfig::param(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double ExperimentConfig::param_double(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_double("experiment." + key, it->second);
}

int ExperimentConfig::param_int(const std::string& key, int fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : parse_int("experiment." + key, it->second);
}

std::vector<int> ExperimentConfig::param_int_list(const std::string& key,
                                                  const std::vector<int>& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<int> out;
  for (const auto& item : split_list(it->second))
    out.push_back(parse_int("experiment." + key, item));
  return out;
}

std::vector<double> ExperimentConfig::param_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second))
    out.push_back(parse_double("experiment." + key, item));
  return out;
}

}  // namespace ycl
