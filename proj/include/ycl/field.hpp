#pragma once

#include <Eigen/Dense>

#include "ycl/grid.hpp"

namespace ycl {

// Real grid function on a TorusGrid (charge density or potential energy,
// depending on context). Values are stored flattened in the grid's row-major
// point order; integrals use midpoint quadrature with weight h^d.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const TorusGrid& grid, Eigen::ArrayXd values);
  static ScalarField zero(const TorusGrid& grid);
  static ScalarField constant(const TorusGrid& grid, double value);

  const TorusGrid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  Eigen::ArrayXd& values() { return values_; }
  double operator()(std::int64_t point_index) const { return values_(point_index); }

  double integral() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double scale);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double s, ScalarField f) { return f *= s; }

 private:
  TorusGrid grid_;
  Eigen::ArrayXd values_;
};

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* where);

enum class NormKind { L2, L2Unif, Hminus1, H2Unif };

double l2_norm(const ScalarField& f);
// Max over unit cells of the cell-local L2 norm.
double l2_unif_norm(const ScalarField& f);
// Cell-local L2 norm of one cell.
double cell_l2_norm(const ScalarField& f, int cell_index);
// Discrete H^{-1} norm with the Yukawa weight 1/(|k|^2 + m^2).
double hminus1_norm(const ScalarField& f, double mass);
// Max over cells of the cell-local L2 norm of (1 - Laplacian) f, the Laplacian
// applied spectrally on the whole torus before restriction.
double h2_unif_norm(const ScalarField& f);
// Same restricted to a subset of cells (sup over that subset).
double h2_unif_norm_on_cells(const ScalarField& f, const std::vector<int>& cells);
double l2_unif_norm_on_cells(const ScalarField& f, const std::vector<int>& cells);

double field_norm(const ScalarField& f, NormKind kind, double mass = 1.0);

}  // namespace ycl
