#include "ycl/field.hpp"

#include <cmath>

#include "ycl/errors.hpp"
#include "ycl/fourier.hpp"

namespace ycl {

ScalarField::ScalarField(const TorusGrid& grid, Eigen::ArrayXd values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.total_points())
    fail(ErrorCode::grid_mismatch, "ScalarField: value count does not match grid");
}

ScalarField ScalarField::zero(const TorusGrid& grid) {
  return ScalarField(grid, Eigen::ArrayXd::Zero(grid.total_points()));
}

ScalarField ScalarField::constant(const TorusGrid& grid, double value) {
  return ScalarField(grid, Eigen::ArrayXd::Constant(grid.total_points(), value));
}

double ScalarField::integral() const {
  return grid_.point_weight() * values_.sum();
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(*this, other, "field +");
  values_ += other.values_;
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(*this, other, "field -");
  values_ -= other.values_;
  return *this;
}

ScalarField& ScalarField::operator*=(double scale) {
  values_ *= scale;
  return *this;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where) {
  if (!(a.grid() == b.grid()))
    fail(ErrorCode::grid_mismatch, std::string(where) + ": fields live on different grids");
}

double l2_norm(const ScalarField& f) {
  return std::sqrt(f.grid().point_weight() * f.values().square().sum());
}

double cell_l2_norm(const ScalarField& f, int cell_index) {
  double s = 0;
  for (auto p : f.grid().points_in_cell(cell_index)) s += f(p) * f(p);
  return std::sqrt(f.grid().point_weight() * s);
}

double l2_unif_norm(const ScalarField& f) {
  double best = 0;
  for (int c = 0; c < f.grid().total_cells(); ++c) best = std::max(best, cell_l2_norm(f, c));
  return best;
}

double l2_unif_norm_on_cells(const ScalarField& f, const std::vector<int>& cells) {
  double best = 0;
  for (int c : cells) best = std::max(best, cell_l2_norm(f, c));
  return best;
}

double hminus1_norm(const ScalarField& f, double mass) {
  const auto coeffs = fourier_coefficients(f.grid(), f.values());
  const TorusGrid& g = f.grid();
  double sum = 0;
  for (std::int64_t idx = 0; idx < g.total_points(); ++idx) {
    const auto p = g.unflatten_point(idx);
    double k2 = 0;
    for (int a = 0; a < g.dim; ++a) {
      const double k = g.frequency(p[a]);
      k2 += k * k;
    }
    sum += std::norm(coeffs(idx)) / (k2 + mass * mass);
  }
  return std::sqrt(sum / g.torus_volume());
}

namespace {

ScalarField one_minus_laplacian(const ScalarField& f) {
  Eigen::ArrayXd out = apply_multiplier(f.grid(), f.values(), [](const std::array<double, 3>& k) {
    return 1.0 + k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
  });
  return ScalarField(f.grid(), std::move(out));
}

}  // namespace

double h2_unif_norm(const ScalarField& f) {
  return l2_unif_norm(one_minus_laplacian(f));
}

double h2_unif_norm_on_cells(const ScalarField& f, const std::vector<int>& cells) {
  return l2_unif_norm_on_cells(one_minus_laplacian(f), cells);
}

double field_norm(const ScalarField& f, NormKind kind, double mass) {
  switch (kind) {
    case NormKind::L2: return l2_norm(f);
    case NormKind::L2Unif: return l2_unif_norm(f);
    case NormKind::Hminus1: return hminus1_norm(f, mass);
    case NormKind::H2Unif: return h2_unif_norm(f);
  }
  return 0;
}

}  // namespace ycl
