#include "ycl/crystal.hpp"

#include <cmath>

#include "ycl/errors.hpp"

namespace ycl {

void CrystalSpec::validate() const {
  grid.validate();
  yukawa.validate();
  if (yukawa.dim != grid.dim)
    fail(ErrorCode::config_invalid, "crystal: yukawa dimension differs from grid");
  if (!(nu_amplitude >= 0)) fail(ErrorCode::config_invalid, "crystal: nu_amplitude must be >= 0");
  if (!(nu_width > 0)) fail(ErrorCode::config_invalid, "crystal: nu_width must be > 0");
  if (electrons_per_cell < 1)
    fail(ErrorCode::config_invalid, "crystal: electrons_per_cell must be >= 1");
}

namespace {

// Gaussian profile repeated at every cell center: the separable product over
// axes of the 1-periodic periodization of exp(-t^2 / 2 w^2). Image sums run
// until the tail is below 1e-18 of the peak.
Eigen::ArrayXd periodized_gaussian(const TorusGrid& grid, double width) {
  const int images = static_cast<int>(std::ceil(9.2 * width)) + 1;
  Eigen::ArrayXd out(grid.total_points());
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for (std::int64_t idx = 0; idx < grid.total_points(); ++idx) {
    const auto x = grid.point_coords(idx);
    double value = 1.0;
    for (int a = 0; a < grid.dim; ++a) {
      // Wrapped offset to the nearest cell center, in [-0.5, 0.5).
      const double frac = x[a] - std::floor(x[a]) - 0.5;
      double axis = 0;
      for (int j = -images; j <= images; ++j) {
        const double t = frac + j;
        axis += std::exp(-t * t * inv2w2);
      }
      value *= axis;
    }
    out(idx) = value;
  }
  return out;
}

}  // namespace

ScalarField periodic_nuclear_density(const CrystalSpec& spec) {
  const TorusGrid& grid = spec.grid;
  Eigen::ArrayXd values = periodized_gaussian(grid, spec.nu_width);
  // Normalize discretely so each cell carries exactly Z.
  const double per_cell = grid.point_weight() * values.sum() / grid.total_cells();
  values *= spec.nu_amplitude / per_cell;
  return ScalarField(grid, std::move(values));
}

ScalarField defect_shape(const TorusGrid& grid, double amplitude, double width, int site_cell) {
  if (site_cell < 0 || site_cell >= grid.total_cells())
    fail(ErrorCode::config_invalid, "defect_shape: site outside torus");
  if (!(width > 0)) fail(ErrorCode::config_invalid, "defect_shape: width must be > 0");
  Eigen::ArrayXd values = Eigen::ArrayXd::Zero(grid.total_points());
  const auto cell = grid.unflatten_cell(site_cell);
  const double inv2w2 = 1.0 / (2.0 * width * width);
  for (auto p : grid.points_in_cell(site_cell)) {
    const auto x = grid.point_coords(p);
    double r2 = 0;
    for (int a = 0; a < grid.dim; ++a) {
      const double t = x[a] - (cell[a] + 0.5);
      r2 += t * t;
    }
    values(p) = amplitude * std::exp(-r2 * inv2w2);
  }
  return ScalarField(grid, std::move(values));
}

ScalarField translate_by_cells(const ScalarField& f, const std::array<int, 3>& offset) {
  const TorusGrid& grid = f.grid();
  const int n = grid.points_per_cell;
  const int axis = grid.axis_points();
  Eigen::ArrayXd values(grid.total_points());
  for (std::int64_t p = 0; p < grid.total_points(); ++p) {
    const auto src = grid.unflatten_point(p);
    std::array<int, 3> dst = src;
    for (int a = 0; a < grid.dim; ++a)
      dst[a] = ((src[a] + offset[a] * n) % axis + axis) % axis;
    values(grid.flatten_point(dst)) = f(p);
  }
  return ScalarField(grid, std::move(values));
}

ScalarField assemble_defects(const ScalarField& chi, const std::vector<int>& sites) {
  const TorusGrid& grid = chi.grid();
  ScalarField out = ScalarField::zero(grid);
  for (int site : sites) {
    if (site < 0 || site >= grid.total_cells())
      fail(ErrorCode::config_invalid, "assemble_defects: site outside torus");
    out += translate_by_cells(chi, grid.unflatten_cell(site));
  }
  return out;
}

PeriodicGroundState solve_periodic(const CrystalSpec& spec, const ScfOptions& opts) {
  spec.validate();
  const TorusGrid& grid = spec.grid;
  const int n_occ = spec.electrons_per_cell * grid.total_cells();
  if (n_occ >= grid.total_points())
    fail(ErrorCode::config_invalid, "solve_periodic: filling exceeds basis size");

  PeriodicGroundState gs;
  gs.spec = spec;
  gs.nu_per = periodic_nuclear_density(spec);

  // Start from the uniform density carrying N_e electrons per cell.
  ScalarField rho = ScalarField::constant(grid, static_cast<double>(spec.electrons_per_cell));
  Spectrum spectrum;
  bool converged = false;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const ScalarField v = yukawa_convolve(rho - gs.nu_per, spec.yukawa);
    spectrum = diagonalize(Hamiltonian::with_potential(v), opts.max_dense_dim);
    try {
      set_fermi_by_count(spectrum, n_occ);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::degenerate_fermi_level)
        fail(ErrorCode::not_an_insulator,
             "solve_periodic: degenerate Fermi level, no gap opens at this filling "
             "(not an insulator)");
      throw;
    }
    const ScalarField rho_new = density_from_fermi(spectrum, 0.0);
    const double residual = l2_unif_norm(rho_new - rho);
    gs.residual_history.push_back(residual);
    gs.iterations = iter + 1;
    if (residual <= opts.tol_scf) {
      rho = rho_new;
      converged = true;
      break;
    }
    rho = rho + opts.mixing * (rho_new - rho);
  }
  if (!converged)
    fail(ErrorCode::scf_not_converged,
         "solve_periodic: no convergence after " + std::to_string(opts.max_iter) + " iterations");

  // Final consistent triple (rho, V, spectrum) with V = Y_m * (rho - nu).
  gs.rho_per = rho;
  gs.v_per = yukawa_convolve(rho - gs.nu_per, spec.yukawa);
  gs.spectrum = diagonalize(Hamiltonian::with_potential(gs.v_per), opts.max_dense_dim);
  set_fermi_by_count(gs.spectrum, n_occ);
  if (gs.spectrum.gap < opts.gap_min)
    fail(ErrorCode::not_an_insulator,
         "solve_periodic: gap " + std::to_string(gs.spectrum.gap) + " below gap_min " +
             std::to_string(opts.gap_min) + " (not an insulator)");
  return gs;
}

}  // namespace ycl
