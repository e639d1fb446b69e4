#include "ycl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ycl/errors.hpp"

namespace ycl {

std::vector<int> box_cells(const TorusGrid& grid, int base_cell, int box_size) {
  std::vector<int> cells;
  for (int c = 0; c < grid.total_cells(); ++c) {
    const auto off = grid.cell_offset(base_cell, c);
    bool inside = true;
    for (int a = 0; a < grid.dim; ++a)
      if (!(off[a] >= -(box_size / 2) && off[a] < (box_size + 1) / 2)) inside = false;
    if (inside) cells.push_back(c);
  }
  return cells;
}

std::vector<int> ball_cells(const TorusGrid& grid, int base_cell, double radius) {
  std::vector<int> cells;
  for (int c = 0; c < grid.total_cells(); ++c)
    if (grid.cell_distance(base_cell, c) <= radius) cells.push_back(c);
  return cells;
}

std::vector<int> support_cells(const ScalarField& f) {
  std::vector<int> cells;
  for (int c = 0; c < f.grid().total_cells(); ++c) {
    for (auto p : f.grid().points_in_cell(c)) {
      if (f(p) != 0.0) {
        cells.push_back(c);
        break;
      }
    }
  }
  return cells;
}

namespace {

double distance_to_cells(const TorusGrid& grid, int cell, const std::vector<int>& targets) {
  double best = std::numeric_limits<double>::infinity();
  for (int t : targets) best = std::min(best, grid.cell_distance(cell, t));
  return best;
}

// Log-transformed least squares with the first shell excluded (near-field
// contamination), keeping at least two points.
LineFit fit_excluding_first(const std::vector<double>& xs, const std::vector<double>& logs) {
  if (xs.size() > 2) {
    std::vector<double> x2(xs.begin() + 1, xs.end());
    std::vector<double> y2(logs.begin() + 1, logs.end());
    return fit_line(x2, y2);
  }
  return fit_line(xs, logs);
}

}  // namespace

DecayProfile decay_profile(const DefectSolution& sol, const std::vector<int>& radii) {
  const TorusGrid& grid = sol.nu.grid();
  const auto supp = support_cells(sol.nu);
  if (supp.empty()) {
    DecayProfile profile;
    profile.radii = radii;
    profile.shell_v.assign(radii.size(), 0.0);
    profile.shell_rho.assign(radii.size(), 0.0);
    return profile;
  }
  for (int r : radii)
    if (r > grid.cells / 2)
      fail(ErrorCode::config_invalid, "decay_profile: radius exceeds torus half-width");

  DecayProfile profile;
  profile.radii = radii;
  for (int r : radii) {
    std::vector<int> far;
    for (int c = 0; c < grid.total_cells(); ++c)
      if (distance_to_cells(grid, c, supp) >= r) far.push_back(c);
    profile.shell_v.push_back(far.empty() ? 0.0 : h2_unif_norm_on_cells(sol.v, far));
    profile.shell_rho.push_back(far.empty() ? 0.0 : l2_unif_norm_on_cells(sol.rho, far));
  }

  std::vector<double> log_r, log_y, r_lin, logr2;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (profile.shell_v[i] <= 0) continue;
    log_r.push_back(std::log(radii[i]));
    log_y.push_back(std::log(profile.shell_v[i]));
    r_lin.push_back(radii[i]);
    logr2.push_back(std::log(radii[i]) * std::log(radii[i]));
  }
  for (std::size_t i = 0; i + 1 < log_r.size(); ++i)
    profile.local_exponents_v.push_back(-(log_y[i + 1] - log_y[i]) /
                                        (log_r[i + 1] - log_r[i]));
  if (r_lin.size() >= 2) {
    profile.exp_fit_v = fit_excluding_first(r_lin, log_y);
    profile.log2_fit_v = fit_excluding_first(logr2, log_y);
  }
  return profile;
}

namespace {

ScalarField restrict_to_cells(const ScalarField& f, const std::vector<int>& cells) {
  ScalarField out = ScalarField::zero(f.grid());
  for (int c : cells)
    for (auto p : f.grid().points_in_cell(c)) out.values()(p) = f(p);
  return out;
}

}  // namespace

std::vector<ErrorCurvePoint> locality_error(const ScalarField& nu, const PeriodicGroundState& gs,
                                            const ScfOptions& opts,
                                            const std::vector<int>& truncations, double beta,
                                            int base_cell) {
  const DefectSolution full = solve_defect_scf(nu, gs, opts);
  std::vector<ErrorCurvePoint> curve;
  for (int box : truncations) {
    const ScalarField nu_l = restrict_to_cells(nu, box_cells(nu.grid(), base_cell, box));
    const DefectSolution trunc = solve_defect_scf(nu_l, gs, opts);
    const double probe_radius = box / std::pow(4.0, beta);
    const auto probe = ball_cells(nu.grid(), base_cell, probe_radius);
    ErrorCurvePoint point;
    point.param = box;
    point.err_v = h2_unif_norm_on_cells(full.v - trunc.v, probe);
    point.err_rho = l2_unif_norm_on_cells(full.rho - trunc.rho, probe);
    curve.push_back(point);
  }
  return curve;
}

std::vector<ErrorCurvePoint> superposition_error(const ScalarField& chi,
                                                 const PeriodicGroundState& gs,
                                                 const ScfOptions& opts,
                                                 const std::vector<int>& separations,
                                                 double beta) {
  const TorusGrid& grid = chi.grid();
  const DefectSolution sol_1 = solve_defect_scf(chi, gs, opts);
  std::vector<ErrorCurvePoint> curve;
  for (int sep : separations) {
    if (sep > grid.cells / 2)
      fail(ErrorCode::config_invalid, "superposition_error: separation exceeds torus half-width");
    const ScalarField nu_2 = translate_by_cells(chi, {sep, 0, 0});
    const DefectSolution sol_2 = solve_defect_scf(nu_2, gs, opts);
    const DefectSolution sol_12 = solve_defect_scf(chi + nu_2, gs, opts);

    const auto supp_2 = support_cells(nu_2);
    const double probe_radius = sep / std::pow(4.0, beta);
    std::vector<int> probe;
    for (int c = 0; c < grid.total_cells(); ++c)
      if (distance_to_cells(grid, c, supp_2) <= probe_radius) probe.push_back(c);

    ErrorCurvePoint point;
    point.param = sep;
    point.err_v = h2_unif_norm_on_cells(sol_12.v - sol_1.v - sol_2.v, probe);
    point.err_rho = l2_unif_norm_on_cells(sol_12.rho - sol_1.rho - sol_2.rho, probe);
    curve.push_back(point);
  }
  return curve;
}

std::vector<ThermoPoint> thermodynamic_limit_curve(const ScalarField& nu,
                                                   const PeriodicGroundState& gs,
                                                   const ScfOptions& opts,
                                                   const std::vector<int>& truncations,
                                                   const std::vector<int>& region_cells,
                                                   int base_cell) {
  const DefectSolution full = solve_defect_scf(nu, gs, opts);
  std::vector<ThermoPoint> curve;
  for (int box : truncations) {
    const ScalarField nu_l = restrict_to_cells(nu, box_cells(nu.grid(), base_cell, box));
    const DefectSolution trunc = solve_defect_scf(nu_l, gs, opts);
    curve.push_back(
        {box, local_projector_distance(full.spectrum, trunc.spectrum, region_cells)});
  }
  return curve;
}

GronwallReport gronwall_extremal_check(double c, double cprime, double a, double r_max,
                                       double x0) {
  if (!(c >= 0) || !(cprime > 0) || !(a > 1))
    fail(ErrorCode::config_invalid, "gronwall: need C >= 0, C' > 0, a > 1");
  GronwallReport report;
  double prev = x0;
  for (double r = a; r <= r_max; r *= a) {
    const double x = (c / r) * std::exp(-cprime * r) * x0 + (c / r) * prev;
    report.radii.push_back(r);
    report.values.push_back(x);
    prev = x;
  }
  const double peak =
      report.values.empty() ? 0.0
                            : *std::max_element(report.values.begin(), report.values.end());
  if (peak == 0.0) {
    report.bound_holds = true;  // zero start: the bound is vacuous
    return report;
  }
  if (report.radii.size() < 4) {
    report.bound_holds = peak <= x0;
    return report;
  }

  std::vector<double> logr2, logr, logx;
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    const double lr = std::log(report.radii[i]);
    logr2.push_back(lr * lr);
    logr.push_back(lr);
    logx.push_back(std::log(std::max(report.values[i], 1e-300)));
  }
  const std::size_t half = report.radii.size() / 2;
  report.log2_fit_half = fit_line({logr2.begin(), logr2.begin() + half},
                                  {logx.begin(), logx.begin() + half});
  report.log2_fit_full = fit_line(logr2, logx);
  report.power_fit_full = fit_line(logr, logx);

  // With C''' from the first-half fit, the smallest constant making the
  // bound hold on the first half must also cover the tail (up to slack 2).
  const double rate = -report.log2_fit_half.slope;
  double sup_half = 0, sup_all = 0;
  for (std::size_t i = 0; i < report.radii.size(); ++i) {
    if (report.radii[i] < 2.0) continue;
    const double weighted = report.values[i] * std::exp(rate * logr2[i]);
    if (i < half) sup_half = std::max(sup_half, weighted);
    sup_all = std::max(sup_all, weighted);
  }
  report.bound_constant = sup_half;
  report.tail_constant = sup_all;
  report.bound_holds = (rate > 0) && (sup_all <= 2.0 * sup_half);
  return report;
}

}  // namespace ycl
