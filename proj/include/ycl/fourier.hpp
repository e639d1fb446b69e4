#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>

#include "ycl/grid.hpp"

namespace ycl {

// Per-mode symbol of a Fourier multiplier; receives the frequency vector
// (2*pi*q_a/L per axis, unused axes zero).
using MultiplierFn = std::function<double(const std::array<double, 3>&)>;

// Values of a multiplier on every flattened mode of the grid.
Eigen::ArrayXd multiplier_values(const TorusGrid& grid, const MultiplierFn& mult);

// Applies a real, even multiplier to a real grid function: out = F^{-1}(m(k) F in).
// Exact at the discrete level (no truncation beyond the grid's own band limit).
Eigen::ArrayXd apply_multiplier(const TorusGrid& grid, const Eigen::ArrayXd& in,
                                const Eigen::ArrayXd& mode_values);
Eigen::ArrayXd apply_multiplier(const TorusGrid& grid, const Eigen::ArrayXd& in,
                                const MultiplierFn& mult);

// Forward DFT coefficients with the quadrature convention
// fhat(k) = h^d sum_x f(x) e^{-ik.x}, so fhat(0) = integral of f.
Eigen::ArrayXcd fourier_coefficients(const TorusGrid& grid, const Eigen::ArrayXd& in);

// Dense matrix of the convolution operator with the given multiplier
// (circulant in the flattened point indexing). Row x, column y gives the
// response at x to a unit value at y.
Eigen::MatrixXd multiplier_matrix(const TorusGrid& grid, const MultiplierFn& mult);

}  // namespace ycl
