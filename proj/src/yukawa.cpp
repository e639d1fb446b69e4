#include "ycl/yukawa.hpp"

#include <cmath>
#include <numbers>

#include "ycl/errors.hpp"
#include "ycl/fourier.hpp"

namespace ycl {

double YukawaParams::sphere_measure() const {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
  }
  fail(ErrorCode::config_invalid, "yukawa: dim must be in {1,2,3}");
}

void YukawaParams::validate() const {
  sphere_measure();
  if (!(mass > 0)) fail(ErrorCode::config_invalid, "yukawa: mass must be > 0");
}

double yukawa_kernel_closed_form(int dim, double mass, double r) {
  if (!(mass > 0)) fail(ErrorCode::config_invalid, "yukawa kernel: mass must be > 0");
  switch (dim) {
    case 1:
      if (r < 0) fail(ErrorCode::config_invalid, "yukawa kernel: r must be >= 0");
      return std::exp(-mass * r) / mass;
    case 2:
      if (r <= 0) fail(ErrorCode::singularity, "yukawa kernel: K0 diverges at r = 0");
      return std::cyl_bessel_k(0.0, mass * r);
    case 3:
      if (r <= 0) fail(ErrorCode::singularity, "yukawa kernel: 1/r diverges at r = 0");
      return std::exp(-mass * r) / r;
  }
  fail(ErrorCode::config_invalid, "yukawa kernel: dim must be in {1,2,3}");
}

ScalarField yukawa_convolve(const ScalarField& f, const YukawaParams& params) {
  params.validate();
  if (params.dim != f.grid().dim)
    fail(ErrorCode::grid_mismatch, "yukawa_convolve: dimension mismatch");
  const double s = params.sphere_measure();
  const double m2 = params.mass * params.mass;
  Eigen::ArrayXd out =
      apply_multiplier(f.grid(), f.values(), [s, m2](const std::array<double, 3>& k) {
        return s / (k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + m2);
      });
  return ScalarField(f.grid(), std::move(out));
}

double hminus1_inner(const ScalarField& f, const ScalarField& g, double mass) {
  require_same_grid(f, g, "hminus1_inner");
  const TorusGrid& grid = f.grid();
  const auto fc = fourier_coefficients(grid, f.values());
  const auto gc = fourier_coefficients(grid, g.values());
  double sum = 0;
  for (std::int64_t idx = 0; idx < grid.total_points(); ++idx) {
    const auto p = grid.unflatten_point(idx);
    double k2 = 0;
    for (int a = 0; a < grid.dim; ++a) {
      const double k = grid.frequency(p[a]);
      k2 += k * k;
    }
    sum += (std::conj(fc(idx)) * gc(idx)).real() / (k2 + mass * mass);
  }
  return sum / grid.torus_volume();
}

double interaction_energy(const ScalarField& f, const ScalarField& g, const YukawaParams& params) {
  params.validate();
  return params.sphere_measure() * hminus1_inner(f, g, params.mass);
}

}  // namespace ycl
