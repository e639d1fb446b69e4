#pragma once

#include <vector>

#include "ycl/field.hpp"
#include "ycl/grid.hpp"
#include "ycl/spectrum.hpp"
#include "ycl/yukawa.hpp"

namespace ycl {

// Host crystal: one gaussian nuclear profile per unit cell carrying total
// charge Z, plus the electron count per cell. The cell charge and electron
// count are independent; the Yukawa screening keeps a net cell charge
// harmless (it only shifts the potential by a constant).
struct CrystalSpec {
  TorusGrid grid;
  YukawaParams yukawa;
  double nu_amplitude = 4.0;   // Z: total nuclear charge per cell
  double nu_width = 0.15;      // gaussian width of the per-cell profile
  int electrons_per_cell = 1;  // N_e

  void validate() const;
};

// Solver knobs shared by the periodic and defect solvers.
struct ScfOptions {
  double tol_scf = 1e-9;        // L2_unif convergence threshold
  double mixing = 0.5;          // damping of the periodic fixed point
  double gap_min = 0.1;         // insulator assumption threshold
  int max_iter = 200;
  double krylov_tol = 1e-11;    // relative residual for (1+L)^{-1} solves
  int krylov_max_iter = 500;
  int max_dense_dim = 4096;
  double defect_gap_min = 1e-3; // minimal gap of the perturbed Hamiltonian
  int divergence_window = 5;    // consecutive expanding steps before abort
};

// Periodized gaussian sum_k Z g_sigma(x - center(k)), per-cell periodic by
// construction and discretely normalized so each cell integrates to Z.
ScalarField periodic_nuclear_density(const CrystalSpec& spec);

// Defect shape chi placed at one lattice site: amplitude * gaussian of the
// given width, hard-truncated to its home cell so supp(chi) lies inside one
// cell exactly. The amplitude is the peak height.
ScalarField defect_shape(const TorusGrid& grid, double amplitude, double width, int site_cell);

// Torus translation by whole unit cells: an exact index shift on the grid.
ScalarField translate_by_cells(const ScalarField& f, const std::array<int, 3>& offset);

// Exact assembly of sum_{k in sites} chi(. - k); the copies are whole-cell
// translates of chi, sites indexed relative to chi's own placement.
ScalarField assemble_defects(const ScalarField& chi, const std::vector<int>& sites);

// Converged periodic ground state. Self-consistency holds to tol_scf in L2;
// the field equation V = Y_m * (rho - nu) holds exactly by construction.
struct PeriodicGroundState {
  CrystalSpec spec;
  ScalarField nu_per;
  ScalarField rho_per;
  ScalarField v_per;
  Spectrum spectrum;  // of H_per, with fermi_level/gap set mid-gap
  std::vector<double> residual_history;
  int iterations = 0;

  double fermi_level() const { return spectrum.fermi_level; }
  double gap() const { return spectrum.gap; }
};

// Damped fixed-point iteration rho <- (1-a) rho + a rho[1(H[rho] <= eF)].
// Fails with not_an_insulator when the gap stays below gap_min.
PeriodicGroundState solve_periodic(const CrystalSpec& spec, const ScfOptions& opts);

}  // namespace ycl
