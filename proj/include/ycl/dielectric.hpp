#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ycl/crystal.hpp"
#include "ycl/field.hpp"

namespace ycl {

// Dielectric response operator of the host crystal, L: f -> -rho_{Q_{1,f}},
// evaluated by first-order perturbation theory (the residue form of the
// contour integral) with the real eigenfunctions of H_per:
//
//   (L f)(x) = -2 sum_{i occ, a unocc} psi_i(x) psi_a(x)
//              <psi_a | Y_m * f | psi_i> / (eps_i - eps_a).
//
// Linear in f; self-adjoint and positive semi-definite in the H^{-1} metric.
ScalarField apply_dielectric_L(const ScalarField& f, const PeriodicGroundState& gs);

// Solves (1 + L) f = g by conjugate gradients in the H^{-1} inner product
// (1 + L is self-adjoint and >= 1 there). Fails on stagnation.
ScalarField solve_one_plus_L(const ScalarField& g, const PeriodicGroundState& gs,
                             double rel_tol = 1e-11, int max_iter = 500);

// Dense matrix of L acting on value vectors (same convention as
// multiplier_matrix). Intended for desk-scale grids.
Eigen::MatrixXd dense_dielectric_matrix(const PeriodicGroundState& gs);

struct OffdiagProfile {
  std::vector<int> separations;      // |k - j| in cells
  std::vector<double> block_norms;   // max over (j,k) at that separation
  double diagonal_norm = 0;          // max over j of the (j,j) block
};

// Operator norms of cell-block compressions of (1+L)^{-1} versus cell
// separation, from the dense inverse.
OffdiagProfile one_plus_L_offdiagonal_profile(const PeriodicGroundState& gs,
                                              const std::vector<int>& separations);

// Second-order remainder density rho_{Q~2,f} =
//   rho[1(H0 + Y_m*f <= eF)] - rho_per + L f
// (full response minus its linearization). Requires the perturbing potential
// to stay well inside the gap: ||Y_m*f||_inf < g/2.
ScalarField second_order_density(const ScalarField& f, const PeriodicGroundState& gs,
                                 const ScfOptions& opts);

}  // namespace ycl
