#include "ycl/hamiltonian.hpp"

#include "ycl/fourier.hpp"

namespace ycl {

namespace {
double kinetic_symbol(const std::array<double, 3>& k) {
  return 0.5 * (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
}
}  // namespace

Hamiltonian Hamiltonian::free_particle(const TorusGrid& grid) {
  return Hamiltonian{grid, ScalarField::zero(grid)};
}

Hamiltonian Hamiltonian::with_potential(const ScalarField& v) {
  return Hamiltonian{v.grid(), v};
}

Eigen::MatrixXd kinetic_matrix(const TorusGrid& grid) {
  return multiplier_matrix(grid, kinetic_symbol);
}

Eigen::MatrixXd dense_hamiltonian(const Hamiltonian& h) {
  Eigen::MatrixXd mat = kinetic_matrix(h.grid);
  mat.diagonal() += h.potential.values().matrix();
  // Symmetrize away FFT roundoff so the eigensolver sees an exactly
  // symmetric matrix.
  mat = 0.5 * (mat + mat.transpose()).eval();
  return mat;
}

ScalarField apply_hamiltonian(const Hamiltonian& h, const ScalarField& f) {
  Eigen::ArrayXd kinetic = apply_multiplier(h.grid, f.values(), kinetic_symbol);
  return ScalarField(h.grid, kinetic + h.potential.values() * f.values());
}

}  // namespace ycl
