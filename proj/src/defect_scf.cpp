#include "ycl/defect_scf.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ycl/errors.hpp"

namespace ycl {

namespace {

// Diagonalizes H_0 + Y_m * f at fixed Fermi level. Admissibility is
// empirical: the solvers require the perturbed Hamiltonian to keep a gap
// around eF (the projector stays well-defined) and rely on divergence
// detection, not on the sufficient sup-norm bound of the analysis.
Spectrum perturbed_spectrum(const ScalarField& f, const PeriodicGroundState& gs,
                            const ScfOptions& opts) {
  const ScalarField w = yukawa_convolve(f, gs.spec.yukawa);
  Spectrum s = diagonalize(Hamiltonian::with_potential(gs.v_per + w), opts.max_dense_dim);
  set_fermi_by_level(s, gs.fermi_level());
  if (s.gap < opts.defect_gap_min)
    fail(ErrorCode::nu_too_large,
         "defect scf: perturbed gap " + std::to_string(s.gap) +
             " below threshold (nu too large)");
  return s;
}

DefectSolution finalize(const ScalarField& nu, const ScalarField& rho,
                        const PeriodicGroundState& gs, const ScfOptions& opts) {
  DefectSolution sol;
  sol.nu = nu;
  sol.rho = rho;
  sol.v = yukawa_convolve(rho - nu, gs.spec.yukawa);
  sol.spectrum = perturbed_spectrum(rho - nu, gs, opts);
  sol.gap = sol.spectrum.gap;
  const double nu_norm = l2_unif_norm(nu);
  sol.response_ratio = (nu_norm > 0) ? l2_unif_norm(rho) / nu_norm : 0.0;
  return sol;
}

}  // namespace

DefectSolution solve_defect_scf(const ScalarField& nu, const PeriodicGroundState& gs,
                                const ScfOptions& opts, DefectInit init) {
  require_same_grid(nu, gs.rho_per, "solve_defect_scf");
  if (l2_norm(nu) == 0) {
    DefectSolution sol = finalize(nu, ScalarField::zero(nu.grid()), gs, opts);
    sol.iterations = 1;
    return sol;
  }

  // Linear-response head of the fixed point, computed once.
  const ScalarField lin =
      apply_dielectric_L(solve_one_plus_L(nu, gs, opts.krylov_tol, opts.krylov_max_iter), gs);

  ScalarField rho = (init == DefectInit::zero) ? ScalarField::zero(nu.grid()) : lin;
  DefectSolution sol;
  double prev_step = 0;
  int expanding = 0;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const ScalarField f = rho - nu;
    const Spectrum perturbed = perturbed_spectrum(f, gs, opts);
    const ScalarField q2 =
        density_from_fermi(perturbed, 0.0) - gs.rho_per + apply_dielectric_L(f, gs);
    const ScalarField rho_next =
        lin + solve_one_plus_L(q2, gs, opts.krylov_tol, opts.krylov_max_iter);
    const double step = l2_unif_norm(rho_next - rho);
    sol.residual_history.push_back(step);
    if (prev_step > 0) {
      const double factor = step / prev_step;
      sol.contraction_estimate = std::max(sol.contraction_estimate, factor);
      expanding = (factor >= 1.0) ? expanding + 1 : 0;
      if (expanding >= opts.divergence_window)
        fail(ErrorCode::nu_too_large,
             "solve_defect_scf: contraction factor >= 1 over " +
                 std::to_string(opts.divergence_window) + " iterations (nu too large)");
    }
    rho = rho_next;
    sol.iterations = iter + 1;
    if (step <= opts.tol_scf) {
      DefectSolution out = finalize(nu, rho, gs, opts);
      out.iterations = sol.iterations;
      out.residual_history = sol.residual_history;
      out.contraction_estimate = sol.contraction_estimate;
      return out;
    }
    prev_step = step;
  }
  fail(ErrorCode::scf_not_converged,
       "solve_defect_scf: no convergence after " + std::to_string(opts.max_iter) +
           " iterations");
}

DefectSolution solve_defect_direct(const ScalarField& nu, const PeriodicGroundState& gs,
                                   const ScfOptions& opts) {
  require_same_grid(nu, gs.rho_per, "solve_defect_direct");
  ScalarField rho = ScalarField::zero(nu.grid());
  DefectSolution sol;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    const Spectrum s = perturbed_spectrum(rho - nu, gs, opts);
    const ScalarField rho_new = density_from_fermi(s, 0.0) - gs.rho_per;
    const double step = l2_unif_norm(rho_new - rho);
    sol.residual_history.push_back(step);
    sol.iterations = iter + 1;
    if (step <= opts.tol_scf) {
      DefectSolution out = finalize(nu, rho_new, gs, opts);
      out.iterations = sol.iterations;
      out.residual_history = sol.residual_history;
      return out;
    }
    rho = rho + opts.mixing * (rho_new - rho);
  }
  fail(ErrorCode::scf_not_converged,
       "solve_defect_direct: no convergence after " + std::to_string(opts.max_iter) +
           " iterations");
}

double defect_energy(const Eigen::MatrixXd& q, const ScalarField& rho_q, const ScalarField& nu,
                     const PeriodicGroundState& gs) {
  require_same_grid(rho_q, nu, "defect_energy");
  if (q.rows() != gs.spectrum.grid.total_points())
    fail(ErrorCode::grid_mismatch, "defect_energy: projector dimension mismatch");
  const Eigen::MatrixXd h = dense_hamiltonian(Hamiltonian::with_potential(gs.v_per));
  const double ef = gs.fermi_level();
  double trace = (h * q).trace() - ef * q.trace();
  const ScalarField charge = rho_q - nu;
  return trace + 0.5 * interaction_energy(charge, charge, gs.spec.yukawa);
}

RelativeEnergyReport relative_energy_check(const DefectSolution& sol,
                                           const PeriodicGroundState& gs, double theta,
                                           int random_directions, std::uint64_t seed) {
  const Spectrum& s = sol.spectrum;
  const TorusGrid& grid = s.grid;
  const double wt = grid.point_weight();
  const Eigen::MatrixXd h_nu =
      dense_hamiltonian(Hamiltonian::with_potential(gs.v_per + sol.v));
  const double ef = gs.fermi_level();
  const Eigen::MatrixXd p_nu = fermi_projector(s);

  auto rotated_energy = [&](int i_occ, int a_unocc, double angle) {
    Eigen::MatrixXd p = p_nu;
    const Eigen::VectorXd ui = s.eigenvectors.col(i_occ);
    const Eigen::VectorXd ua = s.eigenvectors.col(a_unocc);
    const Eigen::VectorXd mixed = std::cos(angle) * ui + std::sin(angle) * ua;
    p -= ui * ui.transpose();
    p += mixed * mixed.transpose();
    const Eigen::MatrixXd dq = p - p_nu;
    const ScalarField drho(grid, dq.diagonal().array() / wt);
    const double trace = (h_nu * dq).trace() - ef * dq.trace();
    return trace + 0.5 * interaction_energy(drho, drho, gs.spec.yukawa);
  };

  RelativeEnergyReport report;
  report.theta = theta;
  const int top_occ = s.n_occupied - 1;
  const int bottom_unocc = s.n_occupied;
  report.energy_full = rotated_energy(top_occ, bottom_unocc, theta);
  report.energy_half = rotated_energy(top_occ, bottom_unocc, theta / 2);
  report.quadratic_ratio =
      (report.energy_half != 0) ? report.energy_full / report.energy_half : 0;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> occ_pick(0, s.n_occupied - 1);
  std::uniform_int_distribution<int> unocc_pick(s.n_occupied, s.size() - 1);
  report.random_directions = random_directions;
  report.all_positive = true;
  report.min_random_energy = std::numeric_limits<double>::infinity();
  for (int t = 0; t < random_directions; ++t) {
    const double e = rotated_energy(occ_pick(rng), unocc_pick(rng), theta);
    report.min_random_energy = std::min(report.min_random_energy, e);
    if (!(e > 0)) report.all_positive = false;
  }
  return report;
}

}  // namespace ycl
