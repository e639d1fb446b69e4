#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace ycl {

// Uniform periodic grid on the torus [0, L)^d with L unit cells per axis and
// n points per unit cell, spacing h = 1/n. Point i along an axis sits at
// x_i = i*h; cell c along an axis covers [c, c+1) and holds points
// i in [c*n, (c+1)*n). Lattice sites are identified with cells; the site
// position used for defect shapes is the cell center c + 1/2.
//
// Fourier frequencies along an axis are k_q = 2*pi*q/L with the signed index
// q in the symmetric range; frequency 0 appears exactly once.
struct TorusGrid {
  int dim = 1;             // d in {1,2,3}
  int cells = 1;           // L, unit cells per axis
  int points_per_cell = 1; // n, grid points per unit cell per axis

  int axis_points() const { return cells * points_per_cell; }
  std::int64_t total_points() const;
  int total_cells() const;
  double spacing() const { return 1.0 / points_per_cell; }
  double point_weight() const;  // h^d, the quadrature weight per point
  double torus_volume() const;  // L^d

  // Validates the invariants and throws Error(config_invalid) on violation.
  void validate() const;

  bool operator==(const TorusGrid& other) const = default;

  // Flattened row-major indexing (axis 0 slowest).
  std::int64_t flatten_point(const std::array<int, 3>& p) const;
  std::array<int, 3> unflatten_point(std::int64_t index) const;
  int flatten_cell(const std::array<int, 3>& c) const;
  std::array<int, 3> unflatten_cell(int index) const;

  // Cell containing a flattened point index.
  int cell_of_point(std::int64_t point_index) const;

  // Coordinate of a flattened point (unused axes are 0).
  std::array<double, 3> point_coords(std::int64_t point_index) const;

  // Signed frequency 2*pi*q/L for per-axis index i in [0, axis_points).
  double frequency(int axis_index) const;

  // Euclidean distance between cell centers under the periodic metric,
  // measured in cell units.
  double cell_distance(int cell_a, int cell_b) const;

  // Minimal per-axis integer offset, wrapped into [-L/2, L/2).
  std::array<int, 3> cell_offset(int cell_from, int cell_to) const;

  // All flattened point indices belonging to a cell.
  std::vector<std::int64_t> points_in_cell(int cell_index) const;
};

}  // namespace ycl
