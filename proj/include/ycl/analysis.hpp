#pragma once

#include <vector>

#include "ycl/defect_scf.hpp"
#include "ycl/fitting.hpp"

namespace ycl {

// Cells of the centered box Gamma_L around a base cell: per-axis wrapped
// offsets in [-L/2, L/2).
std::vector<int> box_cells(const TorusGrid& grid, int base_cell, int box_size);

// Cells within the given periodic distance of a base cell.
std::vector<int> ball_cells(const TorusGrid& grid, int base_cell, double radius);

// Support of a field as a set of cells (cells with any nonzero value).
std::vector<int> support_cells(const ScalarField& f);

// Shell norms of a converged defect solution versus distance from supp(nu):
// at each radius R, the sup over cells at distance >= R of the cell-local
// H2_unif norm of V_nu and L2_unif norm of rho_nu.
struct DecayProfile {
  std::vector<int> radii;
  std::vector<double> shell_v;
  std::vector<double> shell_rho;
  // Local power-law exponents -dlog(y)/dlog(R) between consecutive radii.
  std::vector<double> local_exponents_v;
  LineFit exp_fit_v;   // log y vs R
  LineFit log2_fit_v;  // log y vs (log R)^2
};

DecayProfile decay_profile(const DefectSolution& sol, const std::vector<int>& radii);

struct ErrorCurvePoint {
  int param = 0;       // truncation size L or separation R
  double err_v = 0;    // H2_unif norm on the probe region
  double err_rho = 0;  // L2_unif norm on the probe region
  double total() const { return err_v + err_rho; }
};

// || V_nu - V_{nu_L} || + || rho_nu - rho_{nu_L} || on B(0, L/4^beta), with
// nu_L = nu restricted to the centered box Gamma_L.
std::vector<ErrorCurvePoint> locality_error(const ScalarField& nu, const PeriodicGroundState& gs,
                                            const ScfOptions& opts,
                                            const std::vector<int>& truncations, double beta,
                                            int base_cell = 0);

// || V_{nu1+nu2} - V_{nu1} - V_{nu2} || near supp(nu2), for two copies of chi
// separated by R cells along the first axis.
std::vector<ErrorCurvePoint> superposition_error(const ScalarField& chi,
                                                 const PeriodicGroundState& gs,
                                                 const ScfOptions& opts,
                                                 const std::vector<int>& separations,
                                                 double beta);

// Local S_1 distance between the Fermi projector of the full-nu state and of
// each truncated-nu state, on a fixed region of cells.
struct ThermoPoint {
  int truncation = 0;
  double distance = 0;
};
std::vector<ThermoPoint> thermodynamic_limit_curve(const ScalarField& nu,
                                                   const PeriodicGroundState& gs,
                                                   const ScfOptions& opts,
                                                   const std::vector<int>& truncations,
                                                   const std::vector<int>& region_cells,
                                                   int base_cell = 0);

// Builds the extremal sequence of the recursion
//   x_R = (C/R) e^{-C' R} x_0 + (C/R) x_{R/a}
// on the geometric grid R = a^n, fits the log-squared law on the first half
// and reports whether the fitted bound covers the whole grid for R >= 2.
struct GronwallReport {
  std::vector<double> radii;
  std::vector<double> values;
  LineFit log2_fit_half;      // log x vs (log R)^2, first half of the grid
  double bound_constant = 0;  // sup over the first half of x * e^{C''' (log R)^2}
  double tail_constant = 0;   // same sup over the whole grid (R >= 2)
  bool bound_holds = false;   // tail_constant <= 2 * bound_constant
  LineFit log2_fit_full;
  LineFit power_fit_full;     // log x vs log R, for the dual-model comparison
};

GronwallReport gronwall_extremal_check(double c, double cprime, double a, double r_max,
                                       double x0 = 1.0);

}  // namespace ycl
