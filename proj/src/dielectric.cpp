#include "ycl/dielectric.hpp"

#include <cmath>

#include "ycl/errors.hpp"
#include "ycl/fourier.hpp"

namespace ycl {

ScalarField apply_dielectric_L(const ScalarField& f, const PeriodicGroundState& gs) {
  const Spectrum& s = gs.spectrum;
  require_same_grid(f, gs.rho_per, "apply_dielectric_L");
  if (!(s.gap > 0)) fail(ErrorCode::not_an_insulator, "apply_dielectric_L: gapless state");

  const int n_occ = s.n_occupied;
  const int n_unocc = s.size() - n_occ;
  const ScalarField w = yukawa_convolve(f, gs.spec.yukawa);

  const auto occ = s.eigenvectors.leftCols(n_occ);
  const auto unocc = s.eigenvectors.rightCols(n_unocc);
  // M(a, i) = <u_a | W | u_i> (diagonal potential, Euclidean pairing equals
  // the h^d-weighted pairing of the normalized grid functions).
  const Eigen::MatrixXd m = unocc.transpose() * w.values().matrix().asDiagonal() * occ;
  Eigen::MatrixXd k(n_unocc, n_occ);
  for (int a = 0; a < n_unocc; ++a)
    for (int i = 0; i < n_occ; ++i)
      k(a, i) = m(a, i) / (s.eigenvalues(i) - s.eigenvalues(n_occ + a));

  // (L f)(x) = -(2/h^d) sum_{ia} u_i(x) u_a(x) k(a,i)
  const Eigen::MatrixXd b = unocc * k;  // grid x occ
  Eigen::ArrayXd out = -(2.0 / f.grid().point_weight()) *
                       (b.array() * occ.array()).rowwise().sum();
  return ScalarField(f.grid(), std::move(out));
}

ScalarField solve_one_plus_L(const ScalarField& g, const PeriodicGroundState& gs,
                             double rel_tol, int max_iter) {
  const double mass = gs.spec.yukawa.mass;
  const double g_norm = std::sqrt(std::max(hminus1_inner(g, g, mass), 0.0));
  if (g_norm == 0) return ScalarField::zero(g.grid());

  // CG in the H^{-1} inner product; A = 1 + L is self-adjoint there with
  // spectrum in [1, 1 + ||L||].
  ScalarField x = ScalarField::zero(g.grid());
  ScalarField r = g;
  ScalarField p = r;
  double rs = hminus1_inner(r, r, mass);
  for (int it = 0; it < max_iter; ++it) {
    if (std::sqrt(rs) <= rel_tol * g_norm) return x;
    const ScalarField ap = p + apply_dielectric_L(p, gs);
    const double alpha = rs / hminus1_inner(p, ap, mass);
    x += alpha * p;
    r -= alpha * ap;
    const double rs_new = hminus1_inner(r, r, mass);
    p = r + (rs_new / rs) * p;
    rs = rs_new;
  }
  if (std::sqrt(rs) <= rel_tol * g_norm * 10) return x;  // tolerate slow last digits
  fail(ErrorCode::krylov_stagnation,
       "solve_one_plus_L: no convergence after " + std::to_string(max_iter) + " iterations");
}

Eigen::MatrixXd dense_dielectric_matrix(const PeriodicGroundState& gs) {
  const Spectrum& s = gs.spectrum;
  const TorusGrid& grid = s.grid;
  const std::int64_t total = grid.total_points();
  const int n_occ = s.n_occupied;
  const int n_unocc = s.size() - n_occ;

  // L = -(2/h^d) sum_{ia} (u_i o u_a)(u_i o u_a)^T G / (eps_i - eps_a)
  // assembled as B diag(c) B^T G with pair columns b_{ia} = u_i o u_a.
  Eigen::MatrixXd b(total, static_cast<std::int64_t>(n_occ) * n_unocc);
  Eigen::VectorXd c(static_cast<std::int64_t>(n_occ) * n_unocc);
  std::int64_t col = 0;
  for (int i = 0; i < n_occ; ++i)
    for (int a = 0; a < n_unocc; ++a, ++col) {
      b.col(col) =
          s.eigenvectors.col(i).array() * s.eigenvectors.col(n_occ + a).array();
      c(col) = 1.0 / (s.eigenvalues(i) - s.eigenvalues(n_occ + a));
    }
  const double sphere = gs.spec.yukawa.sphere_measure();
  const double m2 = gs.spec.yukawa.mass * gs.spec.yukawa.mass;
  const Eigen::MatrixXd green =
      multiplier_matrix(grid, [sphere, m2](const std::array<double, 3>& k) {
        return sphere / (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + m2);
      });
  const Eigen::MatrixXd core = b * c.asDiagonal() * b.transpose();
  return -(2.0 / grid.point_weight()) * core * green;
}

OffdiagProfile one_plus_L_offdiagonal_profile(const PeriodicGroundState& gs,
                                              const std::vector<int>& separations) {
  const TorusGrid& grid = gs.spectrum.grid;
  Eigen::MatrixXd one_plus_l = dense_dielectric_matrix(gs);
  one_plus_l.diagonal().array() += 1.0;
  const Eigen::MatrixXd inverse = one_plus_l.partialPivLu().inverse();

  auto block_norm = [&](int cj, int ck) {
    const auto pj = grid.points_in_cell(cj);
    const auto pk = grid.points_in_cell(ck);
    Eigen::MatrixXd block(pj.size(), pk.size());
    for (std::size_t a = 0; a < pj.size(); ++a)
      for (std::size_t bcol = 0; bcol < pk.size(); ++bcol)
        block(a, bcol) = inverse(pj[a], pk[bcol]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
    return svd.singularValues()(0);
  };

  OffdiagProfile profile;
  for (int c = 0; c < grid.total_cells(); ++c)
    profile.diagonal_norm = std::max(profile.diagonal_norm, block_norm(c, c));
  for (int sep : separations) {
    double best = 0;
    for (int cj = 0; cj < grid.total_cells(); ++cj)
      for (int ck = 0; ck < grid.total_cells(); ++ck)
        if (std::lround(grid.cell_distance(cj, ck)) == sep)
          best = std::max(best, block_norm(cj, ck));
    profile.separations.push_back(sep);
    profile.block_norms.push_back(best);
  }
  return profile;
}

ScalarField second_order_density(const ScalarField& f, const PeriodicGroundState& gs,
                                 const ScfOptions& opts) {
  const ScalarField w = yukawa_convolve(f, gs.spec.yukawa);
  const double sup = w.values().abs().maxCoeff();
  const double g = gs.spectrum.gap;
  if (sup >= 0.5 * g)
    fail(ErrorCode::field_too_large,
         "second_order_density: ||Y_m*f||_inf = " + std::to_string(sup) +
             " exceeds g/2 = " + std::to_string(0.5 * g) + " (gap closure risk)");
  Spectrum perturbed =
      diagonalize(Hamiltonian::with_potential(gs.v_per + w), opts.max_dense_dim);
  set_fermi_by_level(perturbed, gs.fermi_level());
  if (perturbed.gap < opts.defect_gap_min)
    fail(ErrorCode::metallic_configuration,
         "second_order_density: perturbed gap below threshold");
  const ScalarField rho = density_from_fermi(perturbed, 0.0);
  return rho - gs.rho_per + apply_dielectric_L(f, gs);
}

}  // namespace ycl
