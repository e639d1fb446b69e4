#include "ycl/experiments.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <json.hpp>
#include <sstream>

#include "ycl/analysis.hpp"
#include "ycl/dos.hpp"
#include "ycl/errors.hpp"
#include "ycl/io.hpp"
#include "ycl/rng.hpp"
#include "ycl/version.hpp"

namespace ycl {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json fit_to_json(const LineFit& fit) {
  return {{"intercept", fit.intercept},
          {"slope", fit.slope},
          {"r_squared", fit.r_squared},
          {"residual_ss", fit.residual_ss},
          {"points", fit.points}};
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

TestFunction phi_from_params(const ExperimentConfig& cfg, double default_center) {
  const std::string family = cfg.param("phi_family", "gaussian");
  const double center = cfg.param_double("phi_center", default_center);
  const double width = cfg.param_double("phi_width", 1.0);
  const int degree = cfg.param_int("phi_degree", 2);
  return TestFunction::from_family(family, center, width, degree);
}

// Seeded Bernoulli site pattern for extended defect distributions.
std::vector<int> pattern_sites(const ExperimentConfig& cfg, const TorusGrid& grid) {
  const std::string pattern = cfg.param("pattern", "bernoulli");
  std::vector<int> sites;
  if (pattern == "all") {
    for (int c = 0; c < grid.total_cells(); ++c) sites.push_back(c);
  } else if (pattern == "bernoulli") {
    const double fill = cfg.param_double("fill", 0.5);
    for (int c = 0; c < grid.total_cells(); ++c)
      if (counter_uniform01(cfg.seed, 0, c) < fill) sites.push_back(c);
  } else {
    fail(ErrorCode::config_invalid, "experiment.pattern must be 'all' or 'bernoulli'");
  }
  return sites;
}

struct ExperimentDef {
  std::string name;
  std::set<std::string> keys;
  std::function<void(const ExperimentConfig&)> parse;          // no compute
  std::function<json(const ExperimentConfig&, const fs::path&)> run;
  std::string csv_schema;
};

void dump_ground_state(const ExperimentConfig& cfg, const PeriodicGroundState& gs,
                       const fs::path& dir) {
  if (cfg.formats.count("bin")) {
    write_field_binary(dir / "v_per.field", gs.v_per, cfg.mass);
    write_field_binary(dir / "rho_per.field", gs.rho_per, cfg.mass);
    write_field_binary(dir / "nu_per.field", gs.nu_per, cfg.mass);
  }
  if (cfg.formats.count("csv")) {
    write_field_csv(dir / "v_per.csv", gs.v_per);
    write_field_csv(dir / "rho_per.csv", gs.rho_per);
  }
}

void dump_defect_solution(const ExperimentConfig& cfg, const DefectSolution& sol,
                          const PeriodicGroundState& gs, const fs::path& dir) {
  if (cfg.formats.count("bin")) {
    write_field_binary(dir / "nu.field", sol.nu, cfg.mass);
    write_field_binary(dir / "rho_nu.field", sol.rho, cfg.mass);
    write_field_binary(dir / "v_nu.field", sol.v, cfg.mass);
  }
  if (cfg.formats.count("csv")) {
    write_field_csv(dir / "rho_nu.csv", sol.rho);
    write_field_csv(dir / "v_nu.csv", sol.v);
  }
  json manifest{{"iterations", sol.iterations},
                {"residuals", sol.residual_history},
                {"contraction_estimate", sol.contraction_estimate},
                {"response_ratio", sol.response_ratio},
                {"gap", sol.gap},
                {"fermi_level", gs.fermi_level()}};
  write_json_file(dir / "solution.json", manifest);
}

PeriodicGroundState ground_state(const ExperimentConfig& cfg) {
  return solve_periodic(cfg.crystal(), cfg.solver);
}

ScalarField chi_at(const ExperimentConfig& cfg, const TorusGrid& grid, int site) {
  return defect_shape(grid, cfg.defect_amplitude, cfg.defect_width, site);
}

json run_periodic(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  dump_ground_state(cfg, gs, dir);
  return {{"gap", gs.gap()},
          {"fermi_level", gs.fermi_level()},
          {"iterations", gs.iterations},
          {"final_residual", gs.residual_history.back()},
          {"electrons", gs.rho_per.integral()}};
}

json run_defect(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const int site = cfg.param_int("site", cfg.cells / 2);
  const std::vector<int> sites = cfg.param_int_list("sites", {site});
  const ScalarField nu = assemble_defects(chi_at(cfg, gs.spec.grid, 0), sites);
  const DefectSolution sol = solve_defect_scf(nu, gs, cfg.solver);
  dump_defect_solution(cfg, sol, gs, dir);
  return {{"iterations", sol.iterations},
          {"contraction_estimate", sol.contraction_estimate},
          {"response_ratio", sol.response_ratio},
          {"gap", sol.gap},
          {"nu_l2_unif", l2_unif_norm(sol.nu)}};
}

json run_decay(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const int site = cfg.param_int("site", cfg.cells / 2);
  const std::vector<int> radii = cfg.param_int_list("radii", {2, 4, 8, 16});
  const DefectSolution sol =
      solve_defect_scf(chi_at(cfg, gs.spec.grid, site), gs, cfg.solver);
  const DecayProfile profile = decay_profile(sol, radii);

  if (cfg.formats.count("csv")) {
    std::ostringstream csv;
    csv << "radius,shell_v_h2unif,shell_rho_l2unif,exp_fit,log2_fit\n";
    csv.precision(17);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      const double lr = std::log(static_cast<double>(radii[i]));
      csv << radii[i] << ',' << profile.shell_v[i] << ',' << profile.shell_rho[i] << ','
          << std::exp(profile.exp_fit_v.intercept + profile.exp_fit_v.slope * radii[i]) << ','
          << std::exp(profile.log2_fit_v.intercept + profile.log2_fit_v.slope * lr * lr)
          << '\n';
    }
    write_text_file(dir / "decay.csv", csv.str());
  }
  return {{"radii", profile.radii},
          {"shell_v", profile.shell_v},
          {"shell_rho", profile.shell_rho},
          {"local_exponents_v", profile.local_exponents_v},
          {"exp_fit", fit_to_json(profile.exp_fit_v)},
          {"log2_fit", fit_to_json(profile.log2_fit_v)}};
}

void write_error_curve_csv(const fs::path& path, const std::vector<ErrorCurvePoint>& curve,
                           const char* param_name) {
  std::ostringstream csv;
  csv << param_name << ",err_v_h2unif,err_rho_l2unif,err_total\n";
  csv.precision(17);
  for (const auto& p : curve)
    csv << p.param << ',' << p.err_v << ',' << p.err_rho << ',' << p.total() << '\n';
  write_text_file(path, csv.str());
}

json curve_fit_summary(const std::vector<ErrorCurvePoint>& curve) {
  std::vector<double> lx, ly;
  json points = json::array();
  for (const auto& p : curve) {
    points.push_back({{"param", p.param}, {"err_v", p.err_v}, {"err_rho", p.err_rho}});
    if (p.total() > 0) {
      lx.push_back(std::log(static_cast<double>(p.param)));
      ly.push_back(std::log(p.total()));
    }
  }
  json out{{"points", points}};
  if (lx.size() >= 2) out["power_fit"] = fit_to_json(fit_line(lx, ly));
  return out;
}

json run_locality(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<int> truncations = cfg.param_int_list("truncations", {4, 8, 16});
  const double beta = cfg.param_double("beta", 2.0);
  const int base = cfg.param_int("base_cell", cfg.cells / 2);
  const ScalarField nu =
      assemble_defects(chi_at(cfg, gs.spec.grid, 0), pattern_sites(cfg, gs.spec.grid));
  const auto curve = locality_error(nu, gs, cfg.solver, truncations, beta, base);
  if (cfg.formats.count("csv")) write_error_curve_csv(dir / "locality.csv", curve, "box");
  return curve_fit_summary(curve);
}

json run_superposition(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<int> separations = cfg.param_int_list("separations", {4, 8, 16});
  const double beta = cfg.param_double("beta", 2.0);
  const int base = cfg.param_int("base_cell", cfg.cells / 4);
  const auto curve = superposition_error(chi_at(cfg, gs.spec.grid, base), gs, cfg.solver,
                                         separations, beta);
  if (cfg.formats.count("csv"))
    write_error_curve_csv(dir / "superposition.csv", curve, "separation");
  return curve_fit_summary(curve);
}

json run_thermo(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<int> truncations = cfg.param_int_list("truncations", {4, 8, 16, 32});
  const int base = cfg.param_int("base_cell", cfg.cells / 2);
  const std::vector<int> region = cfg.param_int_list("region_cells", {base});
  const ScalarField nu =
      assemble_defects(chi_at(cfg, gs.spec.grid, 0), pattern_sites(cfg, gs.spec.grid));
  const auto curve = thermodynamic_limit_curve(nu, gs, cfg.solver, truncations, region, base);

  if (cfg.formats.count("csv")) {
    std::ostringstream csv;
    csv << "box,s1_local_distance\n";
    csv.precision(17);
    for (const auto& p : curve) csv << p.truncation << ',' << p.distance << '\n';
    write_text_file(dir / "thermo.csv", csv.str());
  }
  json points = json::array();
  std::vector<double> lx, ly;
  for (const auto& p : curve) {
    points.push_back({{"box", p.truncation}, {"distance", p.distance}});
    if (p.distance > 0) {
      lx.push_back(std::log(static_cast<double>(p.truncation)));
      ly.push_back(std::log(p.distance));
    }
  }
  json out{{"points", points}};
  if (lx.size() >= 2) out["power_fit"] = fit_to_json(fit_line(lx, ly));
  return out;
}

json run_ct_probe(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<int> radii = cfg.param_int_list("radii", {1, 2, 3, 4, 5, 6, 7, 8});
  const double delta = cfg.param_double("delta", 0.5);
  const int source = cfg.param_int("source_cell", cfg.cells / 2);
  const double bottom = gs.spectrum.eigenvalues(0);

  json probes = json::array();
  std::ostringstream csv;
  csv << "delta,radius,shell_norm\n";
  csv.precision(17);
  for (double d : {delta, 2 * delta}) {
    const auto probe =
        resolvent_kernel_decay(gs.spectrum, {bottom - d, 0.0}, source, radii);
    for (std::size_t i = 0; i < probe.radii.size(); ++i)
      csv << d << ',' << probe.radii[i] << ',' << probe.shell_norms[i] << '\n';
    probes.push_back({{"delta", d},
                      {"c1", probe.c1},
                      {"c2", probe.c2},
                      {"fitted_rate", probe.fitted_rate},
                      {"r_squared", probe.r_squared}});
  }
  if (cfg.formats.count("csv")) write_text_file(dir / "ct_probe.csv", csv.str());
  return {{"probes", probes}};
}

json run_offdiag(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<int> separations =
      cfg.param_int_list("separations", {1, 2, 3, 4, 5, 6, 7, 8});
  const OffdiagProfile profile = one_plus_L_offdiagonal_profile(gs, separations);
  if (cfg.formats.count("csv")) {
    std::ostringstream csv;
    csv << "separation,block_norm\n";
    csv.precision(17);
    csv << 0 << ',' << profile.diagonal_norm << '\n';
    for (std::size_t i = 0; i < profile.separations.size(); ++i)
      csv << profile.separations[i] << ',' << profile.block_norms[i] << '\n';
    write_text_file(dir / "offdiag.csv", csv.str());
  }
  return {{"diagonal_norm", profile.diagonal_norm},
          {"separations", profile.separations},
          {"block_norms", profile.block_norms}};
}

json run_dos_enum(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<double> ps = cfg.param_double_list("p", {0.1});
  const int budget = cfg.param_int("site_budget", 10);
  const TestFunction phi = phi_from_params(cfg, gs.fermi_level());
  const ScalarField chi = chi_at(cfg, gs.spec.grid, 0);
  TraceCache cache;
  json values = json::array();
  std::ostringstream csv;
  csv << "p,pairing\n";
  csv.precision(17);
  for (double p : ps) {
    const DosPairing pairing =
        dos_exact_enumeration(p, phi, chi, gs, cfg.solver, &cache, budget);
    values.push_back({{"p", p}, {"value", pairing.value}});
    csv << p << ',' << pairing.value << '\n';
  }
  if (cfg.formats.count("csv")) write_text_file(dir / "dos_enum.csv", csv.str());
  return {{"pairings", values}, {"distinct_configurations", cache.size()}};
}

json run_dos_mc(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  EnsembleSpec ensemble;
  ensemble.p = cfg.param_double("p", 0.1);
  ensemble.samples = cfg.param_int("samples", 2000);
  ensemble.threads = cfg.param_int("threads", 1);
  ensemble.seed = cfg.seed;
  const TestFunction phi = phi_from_params(cfg, gs.fermi_level());
  const ScalarField chi = chi_at(cfg, gs.spec.grid, 0);
  TraceCache cache;
  const DosPairing pairing = dos_monte_carlo(ensemble, phi, chi, gs, cfg.solver, &cache);
  json out{{"p", ensemble.p},
           {"samples", ensemble.samples},
           {"value", pairing.value},
           {"stderr", pairing.stderr_},
           {"distinct_configurations", cache.size()}};
  if (cfg.formats.count("csv")) {
    std::ostringstream csv;
    csv << "p,value,stderr\n";
    csv.precision(17);
    csv << ensemble.p << ',' << pairing.value << ',' << pairing.stderr_ << '\n';
    write_text_file(dir / "dos_mc.csv", csv.str());
  }
  return out;
}

json run_dos_slopes(const ExperimentConfig& cfg, const fs::path& dir) {
  const PeriodicGroundState gs = ground_state(cfg);
  const std::vector<double> ps = cfg.param_double_list("p_values", {0.02, 0.04, 0.08});
  const int j_max = cfg.param_int("j_max", 2);
  const double cutoff = cfg.param_double("cutoff", cfg.cells / 2.0);
  const TestFunction phi = phi_from_params(cfg, gs.fermi_level());
  const ScalarField chi = chi_at(cfg, gs.spec.grid, 0);
  const ExpansionSlopeReport report =
      expansion_residual_slopes(ps, j_max, phi, cutoff, chi, gs, cfg.solver);

  if (cfg.formats.count("csv")) {
    std::ostringstream csv;
    csv << "p,pairing";
    for (int j = 0; j <= j_max; ++j) csv << ",residual_J" << j;
    csv << '\n';
    csv.precision(17);
    for (std::size_t i = 0; i < ps.size(); ++i) {
      csv << ps[i] << ',' << report.pairings[i];
      for (int j = 0; j <= j_max; ++j) csv << ',' << report.residuals[j][i];
      csv << '\n';
    }
    write_text_file(dir / "dos_slopes.csv", csv.str());
  }
  return {{"p_values", report.p_values},
          {"pairings", report.pairings},
          {"n0", report.n0},
          {"mu1", report.mu1},
          {"mu2", report.mu2},
          {"mu2_tail", report.mu2_tail},
          {"residuals", report.residuals},
          {"slopes", report.slopes}};
}

json run_gronwall(const ExperimentConfig& cfg, const fs::path& dir) {
  const double c = cfg.param_double("c", 1.0);
  const double cprime = cfg.param_double("c_prime", 1.0);
  const double a = cfg.param_double("a", 4.0);
  const double r_max = cfg.param_double("r_max", 1e6);
  const GronwallReport report = gronwall_extremal_check(c, cprime, a, r_max);
  if (cfg.formats.count("csv")) {
    std::ostringstream csv;
    csv << "radius,value\n";
    csv.precision(17);
    for (std::size_t i = 0; i < report.radii.size(); ++i)
      csv << report.radii[i] << ',' << report.values[i] << '\n';
    write_text_file(dir / "gronwall.csv", csv.str());
  }
  return {{"bound_holds", report.bound_holds},
          {"bound_constant", report.bound_constant},
          {"tail_constant", report.tail_constant},
          {"log2_fit_half", fit_to_json(report.log2_fit_half)},
          {"log2_fit_full", fit_to_json(report.log2_fit_full)},
          {"power_fit_full", fit_to_json(report.power_fit_full)}};
}

const std::vector<ExperimentDef>& registry() {
  static const std::vector<ExperimentDef> defs = [] {
    std::vector<ExperimentDef> v;
    auto parse_phi = [](const ExperimentConfig& cfg) {
      phi_from_params(cfg, 0.0);  // validates family/width/degree
    };
    v.push_back({"periodic", {}, [](const ExperimentConfig&) {}, run_periodic,
                 "v_per.csv,rho_per.csv: i0..,value"});
    v.push_back({"defect",
                 {"site", "sites"},
                 [](const ExperimentConfig& cfg) {
                   cfg.param_int("site", 0);
                   cfg.param_int_list("sites", {});
                 },
                 run_defect, "rho_nu.csv,v_nu.csv: i0..,value"});
    v.push_back({"decay",
                 {"site", "radii"},
                 [](const ExperimentConfig& cfg) {
                   cfg.param_int("site", 0);
                   for (int r : cfg.param_int_list("radii", {2, 4}))
                     if (r < 1) fail(ErrorCode::config_invalid, "decay: radii must be >= 1");
                 },
                 run_decay, "decay.csv: radius,shell_v_h2unif,shell_rho_l2unif,exp_fit,log2_fit"});
    v.push_back({"locality",
                 {"truncations", "beta", "base_cell", "pattern", "fill"},
                 [](const ExperimentConfig& cfg) {
                   if (cfg.param_double("beta", 2.0) < 2.0)
                     fail(ErrorCode::config_invalid, "locality: beta must be >= 2");
                   cfg.param_int_list("truncations", {});
                   const std::string p = cfg.param("pattern", "bernoulli");
                   if (p != "all" && p != "bernoulli")
                     fail(ErrorCode::config_invalid, "locality: bad pattern");
                 },
                 run_locality, "locality.csv: box,err_v_h2unif,err_rho_l2unif,err_total"});
    v.push_back({"superposition",
                 {"separations", "beta", "base_cell"},
                 [](const ExperimentConfig& cfg) {
                   if (cfg.param_double("beta", 2.0) < 2.0)
                     fail(ErrorCode::config_invalid, "superposition: beta must be >= 2");
                   cfg.param_int_list("separations", {});
                 },
                 run_superposition,
                 "superposition.csv: separation,err_v_h2unif,err_rho_l2unif,err_total"});
    v.push_back({"thermo",
                 {"truncations", "base_cell", "region_cells", "pattern", "fill"},
                 [](const ExperimentConfig& cfg) {
                   cfg.param_int_list("truncations", {});
                   cfg.param_int_list("region_cells", {});
                 },
                 run_thermo, "thermo.csv: box,s1_local_distance"});
    v.push_back({"ct-probe",
                 {"radii", "delta", "source_cell"},
                 [](const ExperimentConfig& cfg) {
                   if (!(cfg.param_double("delta", 0.5) > 0))
                     fail(ErrorCode::config_invalid, "ct-probe: delta must be > 0");
                   cfg.param_int_list("radii", {});
                 },
                 run_ct_probe, "ct_probe.csv: delta,radius,shell_norm"});
    v.push_back({"offdiag-L",
                 {"separations"},
                 [](const ExperimentConfig& cfg) { cfg.param_int_list("separations", {}); },
                 run_offdiag, "offdiag.csv: separation,block_norm"});
    v.push_back({"dos-enum",
                 {"p", "site_budget", "phi_family", "phi_center", "phi_width", "phi_degree"},
                 [parse_phi](const ExperimentConfig& cfg) {
                   parse_phi(cfg);
                   for (double p : cfg.param_double_list("p", {0.1}))
                     if (p < 0 || p > 1)
                       fail(ErrorCode::config_invalid, "dos-enum: p outside [0,1]");
                 },
                 run_dos_enum, "dos_enum.csv: p,pairing"});
    v.push_back({"dos-mc",
                 {"p", "samples", "threads", "phi_family", "phi_center", "phi_width",
                  "phi_degree"},
                 [parse_phi](const ExperimentConfig& cfg) {
                   parse_phi(cfg);
                   if (cfg.param_int("samples", 2000) < 2)
                     fail(ErrorCode::config_invalid, "dos-mc: samples must be >= 2");
                 },
                 run_dos_mc, "dos_mc.csv: p,value,stderr"});
    v.push_back({"dos-slopes",
                 {"p_values", "j_max", "cutoff", "phi_family", "phi_center", "phi_width",
                  "phi_degree"},
                 [parse_phi](const ExperimentConfig& cfg) {
                   parse_phi(cfg);
                   if (cfg.param_double_list("p_values", {0.02, 0.04, 0.08}).size() < 2)
                     fail(ErrorCode::config_invalid, "dos-slopes: need >= 2 p values");
                   const int j = cfg.param_int("j_max", 2);
                   if (j < 0 || j > 2)
                     fail(ErrorCode::config_invalid, "dos-slopes: j_max must be in {0,1,2}");
                 },
                 run_dos_slopes, "dos_slopes.csv: p,pairing,residual_J0.."});
    v.push_back({"gronwall",
                 {"c", "c_prime", "a", "r_max"},
                 [](const ExperimentConfig& cfg) {
                   if (!(cfg.param_double("a", 4.0) > 1))
                     fail(ErrorCode::config_invalid, "gronwall: a must be > 1");
                   if (!(cfg.param_double("c_prime", 1.0) > 0))
                     fail(ErrorCode::config_invalid, "gronwall: c_prime must be > 0");
                 },
                 run_gronwall, "gronwall.csv: radius,value"});
    return v;
  }();
  return defs;
}

const ExperimentDef& find_experiment(const std::string& name) {
  for (const auto& def : registry())
    if (def.name == name) return def;
  fail(ErrorCode::config_invalid, "unknown experiment '" + name + "'");
}

}  // namespace

std::vector<std::string> list_experiments() {
  std::vector<std::string> names;
  for (const auto& def : registry()) names.push_back(def.name);
  return names;
}

void validate_experiment(const ExperimentConfig& cfg) {
  const ExperimentDef& def = find_experiment(cfg.experiment);
  for (const auto& [key, value] : cfg.params)
    if (!def.keys.count(key))
      fail(ErrorCode::config_invalid,
           "experiment." + key + " is not a parameter of '" + cfg.experiment + "'");
  def.parse(cfg);
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  RunResult result;
  fs::path dir = cfg.output_directory;
  if (const char* root = std::getenv("YCL_OUTPUT_ROOT"); root && *root && dir.is_relative())
    dir = fs::path(root) / dir;
  result.output_directory = dir;
  try {
    validate_experiment(cfg);
  } catch (const Error& e) {
    result.exit_code = 2;
    result.error_code = error_code_name(e.code());
    result.message = e.what();
    return result;
  }

  const ExperimentDef& def = find_experiment(cfg.experiment);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    result.exit_code = 3;
    result.error_code = error_code_name(ErrorCode::io_error);
    result.message = "cannot create output directory " + dir.string();
    return result;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const json summary = def.run(cfg, dir);
    const auto stop = std::chrono::steady_clock::now();

    json manifest{{"experiment", cfg.experiment},
                  {"version", kVersion},
                  {"seed", cfg.seed},
                  {"config", cfg.raw.render()},
                  {"result", summary}};
    write_json_file(dir / "manifest.json", manifest);
    write_json_file(dir / "schema.json",
                    json{{"experiment", cfg.experiment}, {"csv_columns", def.csv_schema}});
    // Wall times live apart from the deterministic outputs.
    write_json_file(dir / "timings.json",
                    json{{"seconds", std::chrono::duration<double>(stop - start).count()}});
    result.exit_code = 0;
  } catch (const Error& e) {
    result.exit_code = (e.code() == ErrorCode::config_invalid) ? 2 : 3;
    result.error_code = error_code_name(e.code());
    result.message = e.what();
    write_json_file(dir / "error.json",
                    json{{"code", result.error_code}, {"message", result.message}});
  } catch (const std::exception& e) {
    result.exit_code = 3;
    result.error_code = "internal";
    result.message = e.what();
    write_json_file(dir / "error.json",
                    json{{"code", result.error_code}, {"message", result.message}});
  }
  return result;
}

}  // namespace ycl
