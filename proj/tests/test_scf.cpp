#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "testing.hpp"
#include "ycl/dielectric.hpp"
#include "ycl/errors.hpp"

using namespace ycl;
using namespace ycl::testing;

TEST_CASE("free electrons are not an insulator") {
  CrystalSpec spec = dos_spec();
  spec.nu_amplitude = 0.0;  // flat nuclear background
  try {
    solve_periodic(spec, default_options());
    FAIL("expected not_an_insulator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_an_insulator);
  }
}

TEST_CASE("periodic ground state on the reference instance") {
  const PeriodicGroundState& gs = default_ground_state();
  const ScfOptions opts = default_options();

  CHECK(gs.gap() >= opts.gap_min);
  CHECK(gs.rho_per.integral() ==
        doctest::Approx(32.0).epsilon(1e-10));  // N_e per cell

  // Reported gap matches a fresh re-diagonalization of the final H.
  Spectrum re = diagonalize(Hamiltonian::with_potential(gs.v_per));
  set_fermi_by_count(re, gs.spectrum.n_occupied);
  CHECK(re.gap == doctest::Approx(gs.gap()).epsilon(1e-8));

  // Field equation holds exactly (by construction through the multiplier).
  const ScalarField v = yukawa_convolve(gs.rho_per - gs.nu_per, gs.spec.yukawa);
  CHECK((v.values() - gs.v_per.values()).abs().maxCoeff() < 1e-13);

  // Self-consistency at the solver tolerance.
  const ScalarField rho = density_from_fermi(gs.spectrum, 0.0);
  CHECK(l2_norm(rho - gs.rho_per) <= opts.tol_scf * 10);

  // Per-cell periodicity of rho and V.
  const ScalarField rho_shift = translate_by_cells(gs.rho_per, {1, 0, 0});
  const ScalarField v_shift = translate_by_cells(gs.v_per, {1, 0, 0});
  CHECK((rho_shift.values() - gs.rho_per.values()).abs().maxCoeff() < 1e-8);
  CHECK((v_shift.values() - gs.v_per.values()).abs().maxCoeff() < 1e-8);
}

TEST_CASE("doubling the supercell leaves per-cell densities unchanged") {
  // The Brillouin-zone sampling error decays like the density-matrix
  // off-diagonal, at a rate set by the gap; deep wells make it negligible
  // already at L = 8 -> 16. (The small-gap reference instance converges at
  // rate exp(-kappa L) with kappa ~ 0.05 per cell and needs far larger
  // supercells for the same agreement.)
  CrystalSpec small;
  small.grid = {1, 8, 16};
  small.yukawa = {1, 1.0};
  small.nu_amplitude = 200.0;
  small.nu_width = 0.15;
  small.electrons_per_cell = 1;
  CrystalSpec big = small;
  big.grid.cells = 16;
  ScfOptions opts = default_options();
  opts.tol_scf = 1e-11;
  const PeriodicGroundState gs_small = solve_periodic(small, opts);
  const PeriodicGroundState gs_big = solve_periodic(big, opts);
  for (int i = 0; i < small.grid.points_per_cell; ++i)
    CHECK(std::abs(gs_small.rho_per(i) - gs_big.rho_per(i)) <=
          1e-6 * std::max(1.0, std::abs(gs_big.rho_per(i))));
}

TEST_CASE("dielectric operator: linearity, symmetry, and the residue formula") {
  const PeriodicGroundState& gs = dos_ground_state();
  const TorusGrid& grid = gs.spec.grid;
  const double mass = gs.spec.yukawa.mass;

  CHECK(l2_norm(apply_dielectric_L(ScalarField::zero(grid), gs)) == 0.0);

  const ScalarField f = smooth_random_field(grid, 101);
  const ScalarField g = smooth_random_field(grid, 102);
  const ScalarField lf = apply_dielectric_L(f, gs);
  const ScalarField lg = apply_dielectric_L(g, gs);

  // Linearity.
  const ScalarField combo = apply_dielectric_L(f + 2.0 * g, gs);
  CHECK(l2_norm(combo - lf - 2.0 * lg) <= 1e-11 * (1 + l2_norm(lf)));

  // Self-adjointness in the H^-1 metric.
  const double left = hminus1_inner(f, lg, mass);
  const double right = hminus1_inner(lf, g, mass);
  CHECK(left == doctest::Approx(right).epsilon(1e-8));

  // Positivity of the quadratic form.
  CHECK(hminus1_inner(f, lf, mass) >= -1e-12);
}

TEST_CASE("linearization: finite-difference projector derivative") {
  const PeriodicGroundState& gs = dos_ground_state();
  const ScfOptions opts = default_options();
  const ScalarField f = defect_shape(gs.spec.grid, 1.0, 0.1, 3);
  const ScalarField lf = apply_dielectric_L(f, gs);

  auto residual = [&](double t) {
    const ScalarField w = yukawa_convolve(t * f, gs.spec.yukawa);
    Spectrum s = diagonalize(Hamiltonian::with_potential(gs.v_per + w), opts.max_dense_dim);
    set_fermi_by_level(s, gs.fermi_level());
    const ScalarField rho_t = density_from_fermi(s, 0.0);
    return l2_norm(rho_t - gs.rho_per + t * lf);
  };
  const double r1 = residual(0.04);
  const double r2 = residual(0.02);
  const double r3 = residual(0.01);
  CHECK(r1 / r2 >= 3.4);
  CHECK(r1 / r2 <= 4.6);
  CHECK(r2 / r3 >= 3.4);
  CHECK(r2 / r3 <= 4.6);
}

TEST_CASE("(1+L) solves: residual and dense-matrix agreement") {
  const PeriodicGroundState& gs = dos_ground_state();
  const TorusGrid& grid = gs.spec.grid;

  CHECK(l2_norm(solve_one_plus_L(ScalarField::zero(grid), gs)) == 0.0);

  const ScalarField g = smooth_random_field(grid, 201);
  const ScalarField f = solve_one_plus_L(g, gs);
  const ScalarField back = f + apply_dielectric_L(f, gs);
  CHECK(l2_norm(back - g) / l2_norm(g) <= 1e-9);

  // Dense assembly on the small grid matches the Krylov solve.
  Eigen::MatrixXd one_plus_l = dense_dielectric_matrix(gs);
  one_plus_l.diagonal().array() += 1.0;
  const Eigen::VectorXd dense = one_plus_l.partialPivLu().solve(g.values().matrix());
  CHECK((dense.array() - f.values()).abs().maxCoeff() <=
        1e-8 * (1 + f.values().abs().maxCoeff()));
}

TEST_CASE("L is positive semi-definite in the H^-1 metric (dense check)") {
  const PeriodicGroundState& gs = dos_ground_state();
  const TorusGrid& grid = gs.spec.grid;
  const double mass = gs.spec.yukawa.mass;
  const double sphere = gs.spec.yukawa.sphere_measure();
  const double hd = grid.point_weight();

  const Eigen::MatrixXd l = dense_dielectric_matrix(gs);
  const Eigen::MatrixXd s_half =
      multiplier_matrix(grid, [&](const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        return std::sqrt(hd / (k2 + mass * mass));
      });
  const Eigen::MatrixXd s_half_inv =
      multiplier_matrix(grid, [&](const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        return std::sqrt((k2 + mass * mass) / hd);
      });
  (void)sphere;
  const Eigen::MatrixXd m = s_half * l * s_half_inv;
  const double asym = (m - m.transpose()).norm() / m.norm();
  CHECK(asym <= 1e-6);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (m + m.transpose()),
                                                     Eigen::EigenvaluesOnly);
  CHECK(eig.eigenvalues()(0) >= -1e-8);
}

TEST_CASE("L maps H^-1 into L2 with a refinement-stable bound") {
  ScfOptions opts = default_options();
  double ratios[2];
  int idx = 0;
  for (int n : {8, 16}) {
    CrystalSpec spec = dos_spec();
    spec.grid.points_per_cell = n;
    const PeriodicGroundState gs = solve_periodic(spec, opts);
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const ScalarField f = smooth_random_field(spec.grid, 300 + seed);
      const double num = l2_norm(apply_dielectric_L(f, gs));
      const double den = hminus1_norm(f, spec.yukawa.mass);
      worst = std::max(worst, num / den);
    }
    ratios[idx++] = worst;
  }
  CHECK(std::abs(ratios[1] - ratios[0]) <= 0.2 * ratios[0]);
}

TEST_CASE("second-order remainder is quadratically small") {
  const PeriodicGroundState& gs = dos_ground_state();
  const ScfOptions opts = default_options();
  const ScalarField f = defect_shape(gs.spec.grid, 1.0, 0.1, 3);

  CHECK(l2_norm(second_order_density(ScalarField::zero(gs.spec.grid), gs, opts)) <= 1e-12);

  const double t1 = 0.05, t2 = 0.025;
  const double n1 = l2_unif_norm(second_order_density(t1 * f, gs, opts)) / (t1 * t1);
  const double n2 = l2_unif_norm(second_order_density(t2 * f, gs, opts)) / (t2 * t2);
  CHECK(std::abs(n1 - n2) <= 0.25 * std::max(n1, n2));

  // The first-order part flips sign exactly; the remainder does not.
  const ScalarField l_plus = apply_dielectric_L(f, gs);
  const ScalarField l_minus = apply_dielectric_L(-1.0 * f, gs);
  CHECK(l2_norm(l_plus + l_minus) <= 1e-11 * l2_norm(l_plus));
  const ScalarField q2_plus = second_order_density(0.05 * f, gs, opts);
  const ScalarField q2_minus = second_order_density(-0.05 * f, gs, opts);
  CHECK(l2_norm(q2_plus + q2_minus) > 1e-3 * l2_norm(q2_plus));

  // Fields threatening the gap are rejected.
  const ScalarField huge = defect_shape(gs.spec.grid, 50.0, 0.1, 3);
  CHECK_THROWS_AS(second_order_density(huge, gs, opts), Error);
}

TEST_CASE("defect SCF: trivial, scaling, oracle, uniqueness, admissibility") {
  const PeriodicGroundState& gs = default_ground_state();
  ScfOptions opts = default_options();
  const ScalarField chi = default_chi();

  SUBCASE("zero defect converges immediately to zero") {
    const DefectSolution sol = solve_defect_scf(ScalarField::zero(chi.grid()), gs, opts);
    CHECK(sol.iterations == 1);
    CHECK(l2_norm(sol.rho) == 0.0);
    CHECK(l2_norm(sol.v) == 0.0);
  }

  SUBCASE("scaling family approaches the linear response") {
    const ScalarField lin = apply_dielectric_L(solve_one_plus_L(chi, gs), gs);
    double errs[2];
    int i = 0;
    for (double s : {1e-2, 1e-3}) {
      const DefectSolution sol = solve_defect_scf(s * chi, gs, opts);
      errs[i++] = l2_unif_norm((1.0 / s) * sol.rho - lin);
    }
    CHECK(errs[1] <= 0.3 * errs[0]);  // error is O(s)
    CHECK(errs[0] <= 0.1 * l2_unif_norm(lin));
  }

  SUBCASE("preconditioned and direct solvers agree") {
    const DefectSolution a = solve_defect_scf(chi, gs, opts);
    const DefectSolution b = solve_defect_direct(chi, gs, opts);
    CHECK(l2_unif_norm(a.rho - b.rho) <= 5 * opts.tol_scf);
    CHECK(l2_unif_norm(a.v - b.v) <= 5 * opts.tol_scf);
  }

  SUBCASE("uniqueness: zero and linear-response starts meet") {
    const DefectSolution a = solve_defect_scf(chi, gs, opts, DefectInit::linear_response);
    const DefectSolution b = solve_defect_scf(chi, gs, opts, DefectInit::zero);
    CHECK(l2_unif_norm(a.rho - b.rho) <= 5 * opts.tol_scf);
  }

  SUBCASE("monotone admissibility in the defect strength") {
    double prev = -1;
    for (double s : {0.25, 0.5, 1.0}) {
      const DefectSolution sol = solve_defect_scf(s * chi, gs, opts);
      CHECK(sol.contraction_estimate < 1.0);
      CHECK(sol.contraction_estimate >= prev);
      prev = sol.contraction_estimate;
    }
  }

  SUBCASE("far past the admissible region the solver aborts") {
    const ScalarField big = defect_shape(chi.grid(), 10.0, 0.1, 16);
    try {
      solve_defect_scf(big, gs, opts);
      FAIL("expected nu_too_large");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::nu_too_large);
    }
  }
}

TEST_CASE("fixed point solves the self-consistent equation") {
  const PeriodicGroundState& gs = default_ground_state();
  const ScfOptions opts = default_options();
  const DefectSolution sol = solve_defect_scf(default_chi(), gs, opts);

  Spectrum re = diagonalize(Hamiltonian::with_potential(gs.v_per + sol.v));
  set_fermi_by_level(re, gs.fermi_level());
  const ScalarField rho_full = density_from_fermi(re, 0.0);
  CHECK(l2_unif_norm(rho_full - gs.rho_per - sol.rho) <= 5 * opts.tol_scf);
}

TEST_CASE("defect energy functional") {
  const PeriodicGroundState& gs = dos_ground_state();
  const ScfOptions opts = default_options();
  const TorusGrid& grid = gs.spec.grid;
  const std::int64_t dim = grid.total_points();
  const ScalarField chi = defect_shape(grid, 0.2, 0.1, 4);

  SUBCASE("trivial values") {
    const Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim, dim);
    CHECK(defect_energy(q, ScalarField::zero(grid), ScalarField::zero(grid), gs) ==
          doctest::Approx(0.0));
    const double pure = defect_energy(q, ScalarField::zero(grid), chi, gs);
    CHECK(pure ==
          doctest::Approx(0.5 * interaction_energy(chi, chi, gs.spec.yukawa)).epsilon(1e-12));
    CHECK(pure > 0);
  }

  SUBCASE("the SCF solution minimizes over random trial projectors") {
    const DefectSolution sol = solve_defect_scf(chi, gs, opts);
    const Eigen::MatrixXd p0 = fermi_projector(gs.spectrum);
    const Eigen::MatrixXd q_scf = fermi_projector(sol.spectrum) - p0;
    const ScalarField rho_scf(grid, q_scf.diagonal().array() / grid.point_weight());
    const double e_scf = defect_energy(q_scf, rho_scf, chi, gs);

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> occ(0, sol.spectrum.n_occupied - 1);
    std::uniform_int_distribution<int> unocc(sol.spectrum.n_occupied,
                                             sol.spectrum.size() - 1);
    std::uniform_real_distribution<double> angle(0.02, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::MatrixXd p = fermi_projector(sol.spectrum);
      const Eigen::VectorXd ui = sol.spectrum.eigenvectors.col(occ(rng));
      const Eigen::VectorXd ua = sol.spectrum.eigenvectors.col(unocc(rng));
      const double th = angle(rng);
      const Eigen::VectorXd mixed = std::cos(th) * ui + std::sin(th) * ua;
      p -= ui * ui.transpose();
      p += mixed * mixed.transpose();
      const Eigen::MatrixXd q_trial = p - p0;
      const ScalarField rho_trial(grid, q_trial.diagonal().array() / grid.point_weight());
      CHECK(defect_energy(q_trial, rho_trial, chi, gs) >= e_scf - 1e-10);
    }
  }
}

TEST_CASE("relative energy: zero at the minimizer, quadratic nearby, positive") {
  const PeriodicGroundState& gs = dos_ground_state();
  const ScfOptions opts = default_options();
  const ScalarField chi = defect_shape(gs.spec.grid, 0.2, 0.1, 4);
  const DefectSolution sol = solve_defect_scf(chi, gs, opts);

  const RelativeEnergyReport zero = relative_energy_check(sol, gs, 0.0, 0, 7);
  CHECK(std::abs(zero.energy_full) <= 1e-12);

  const RelativeEnergyReport report = relative_energy_check(sol, gs, 0.02, 20, 7);
  CHECK(report.quadratic_ratio >= 3.4);
  CHECK(report.quadratic_ratio <= 4.6);
  CHECK(report.all_positive);
  CHECK(report.min_random_energy > 0);
}
