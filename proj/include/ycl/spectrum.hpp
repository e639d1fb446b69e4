#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "ycl/field.hpp"
#include "ycl/hamiltonian.hpp"
#include "ycl/test_function.hpp"

namespace ycl {

// Full eigendecomposition of a discretized Hamiltonian. Eigenvectors are
// orthonormal in the Euclidean sense (grid functions psi_i = u_i / h^{d/2}
// are orthonormal under the h^d-weighted inner product) with a deterministic
// sign convention: the largest-magnitude component of each vector is
// positive. The Fermi level stays explicit; occupation means lambda <= ef.
struct Spectrum {
  TorusGrid grid;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // columns, Euclidean-orthonormal
  double fermi_level = 0.0;
  double gap = 0.0;              // distance from fermi_level to the spectrum
  int n_occupied = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Dense diagonalization; fails if the matrix dimension exceeds the budget.
// Residual and orthonormality are checked after the solve.
Spectrum diagonalize(const Hamiltonian& h, int max_dense_dim = 4096);

// Occupies the lowest n_occ states; Fermi level at the midpoint of the gap
// above them. Fails on a (near-)degenerate Fermi level.
void set_fermi_by_count(Spectrum& s, int n_occ, double degeneracy_tol = 1e-10);

// Occupies all states with lambda <= fermi_level; gap = min |lambda - ef|.
void set_fermi_by_level(Spectrum& s, double fermi_level);

// rho(x) = sum_occ |u_i(x)|^2 / h^d, so the integral equals the occupied
// count. Fails with metallic_configuration when gap < gap_min.
ScalarField density_from_fermi(const Spectrum& s, double gap_min);

// Euclidean projector sum_occ u_i u_i^T.
Eigen::MatrixXd fermi_projector(const Spectrum& s);

// Sum_i phi(lambda_i).
double trace_of_function(const Spectrum& s, const TestFunction& phi);

// Sum_i phi(lambda_i) * integral_{cell} |psi_i|^2; sums to the full trace
// over all cells.
double local_trace_of_function(const Spectrum& s, const TestFunction& phi, int cell_index);

// Trace norm of 1_B (P1 - P2) 1_B over the given cells (Fermi projectors).
double local_projector_distance(const Spectrum& s1, const Spectrum& s2,
                                const std::vector<int>& cells);

struct ResolventDecayProbe {
  std::vector<int> radii;          // cell-distance shells
  std::vector<double> shell_norms; // l2 norm of the resolvent column per shell
  double c1 = 0;                   // 1 / d(z, spectrum)
  double c2 = 0;                   // d(z, spectrum) / (1 + |z|)
  double fitted_rate = 0;          // slope of -log(norm) vs distance
  double r_squared = 0;            // goodness of the exponential fit
};

// Solves (z - H) u = e_source for the canonical basis vector at the center
// point of source_cell and reports shell norms over cells at the given
// distances. Fails when z is within 1e-8 of an eigenvalue.
ResolventDecayProbe resolvent_kernel_decay(const Spectrum& s, std::complex<double> z,
                                           int source_cell, const std::vector<int>& radii);

}  // namespace ycl
