#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "ycl/crystal.hpp"
#include "ycl/dielectric.hpp"

namespace ycl {

// Converged defect state: the response density rho_nu, the defect potential
// V_nu = Y_m * (rho_nu - nu), and the spectrum of H_0 + V_nu at the host
// Fermi level.
struct DefectSolution {
  ScalarField nu;
  ScalarField rho;  // rho_nu
  ScalarField v;    // V_nu
  Spectrum spectrum;
  int iterations = 0;
  std::vector<double> residual_history;
  double contraction_estimate = 0;  // max_k ||d rho_{k+1}|| / ||d rho_k||
  double response_ratio = 0;        // ||rho_nu||_unif / ||nu||_unif
  double gap = 0;                   // gap of H_0 + V_nu around eF
};

enum class DefectInit { linear_response, zero };

// Preconditioned fixed-point iteration
//   rho <- L(1+L)^{-1} nu + (1+L)^{-1} rho_{Q~2}(rho - nu)
// started by default from the linear response rho0 = L(1+L)^{-1} nu, the
// fixed point's leading term. Aborts with nu_too_large when the observed
// contraction factor stays >= 1 or the perturbed gap closes.
DefectSolution solve_defect_scf(const ScalarField& nu, const PeriodicGroundState& gs,
                                const ScfOptions& opts,
                                DefectInit init = DefectInit::linear_response);

// Independent oracle: plain damped projector iteration
//   rho <- (1-a) rho + a (rho[1(H0 + Y_m*(rho - nu) <= eF)] - rho_per),
// no preconditioning. Shares only the diagonalization layer with the
// preconditioned solver.
DefectSolution solve_defect_direct(const ScalarField& nu, const PeriodicGroundState& gs,
                                   const ScfOptions& opts);

// Defect energy functional E^nu(Q) = Tr((H_per - eF) Q) + 1/2 D_m(rho_Q - nu,
// rho_Q - nu); the reduced trace Tr_{gamma_0} coincides with the plain trace
// in finite dimension.
double defect_energy(const Eigen::MatrixXd& q, const ScalarField& rho_q, const ScalarField& nu,
                     const PeriodicGroundState& gs);

struct RelativeEnergyReport {
  double theta = 0;
  double energy_full = 0;   // E^rel at rotation angle theta
  double energy_half = 0;   // E^rel at theta/2
  double quadratic_ratio = 0;
  int random_directions = 0;
  bool all_positive = false;
  double min_random_energy = 0;
};

// Relative energy E^rel(gamma) = Tr((H_nu - eF)(gamma - gamma_nu))
//   + 1/2 D_m(rho_gamma - rho_nu, rho_gamma - rho_nu), zero at gamma_nu,
// probed along occupied/unoccupied rotations.
RelativeEnergyReport relative_energy_check(const DefectSolution& sol,
                                           const PeriodicGroundState& gs, double theta,
                                           int random_directions, std::uint64_t seed);

}  // namespace ycl
