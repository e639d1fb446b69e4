#pragma once

#include <Eigen/Dense>

#include "ycl/field.hpp"
#include "ycl/grid.hpp"

namespace ycl {

// H = -1/2 Lap + V with the spectral kinetic multiplier |k|^2 / 2 and a real
// multiplicative potential; self-adjoint by construction.
struct Hamiltonian {
  TorusGrid grid;
  ScalarField potential;

  static Hamiltonian free_particle(const TorusGrid& grid);
  static Hamiltonian with_potential(const ScalarField& v);
};

// Dense real-symmetric matrix in the flattened point basis (Euclidean
// convention: the matrix acts on raw value vectors).
Eigen::MatrixXd dense_hamiltonian(const Hamiltonian& h);

// Dense kinetic part only (circulant).
Eigen::MatrixXd kinetic_matrix(const TorusGrid& grid);

// Matrix-free application H f, for residual checks.
ScalarField apply_hamiltonian(const Hamiltonian& h, const ScalarField& f);

}  // namespace ycl
