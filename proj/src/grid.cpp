#include "ycl/grid.hpp"

#include <cmath>
#include <numbers>

#include "ycl/errors.hpp"

namespace ycl {

std::int64_t TorusGrid::total_points() const {
  std::int64_t total = 1;
  for (int a = 0; a < dim; ++a) total *= axis_points();
  return total;
}

int TorusGrid::total_cells() const {
  int total = 1;
  for (int a = 0; a < dim; ++a) total *= cells;
  return total;
}

double TorusGrid::point_weight() const {
  return std::pow(spacing(), dim);
}

double TorusGrid::torus_volume() const {
  return std::pow(static_cast<double>(cells), dim);
}

void TorusGrid::validate() const {
  if (dim < 1 || dim > 3) fail(ErrorCode::config_invalid, "grid: dim must be in {1,2,3}");
  if (cells < 1) fail(ErrorCode::config_invalid, "grid: cells must be >= 1");
  if (points_per_cell < 1) fail(ErrorCode::config_invalid, "grid: points_per_cell must be >= 1");
}

std::int64_t TorusGrid::flatten_point(const std::array<int, 3>& p) const {
  std::int64_t idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * axis_points() + p[a];
  return idx;
}

std::array<int, 3> TorusGrid::unflatten_point(std::int64_t index) const {
  std::array<int, 3> p{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    p[a] = static_cast<int>(index % axis_points());
    index /= axis_points();
  }
  return p;
}

int TorusGrid::flatten_cell(const std::array<int, 3>& c) const {
  int idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * cells + c[a];
  return idx;
}

std::array<int, 3> TorusGrid::unflatten_cell(int index) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    c[a] = index % cells;
    index /= cells;
  }
  return c;
}

int TorusGrid::cell_of_point(std::int64_t point_index) const {
  const auto p = unflatten_point(point_index);
  std::array<int, 3> c{0, 0, 0};
  for (int a = 0; a < dim; ++a) c[a] = p[a] / points_per_cell;
  return flatten_cell(c);
}

std::array<double, 3> TorusGrid::point_coords(std::int64_t point_index) const {
  const auto p = unflatten_point(point_index);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = p[a] * spacing();
  return x;
}

double TorusGrid::frequency(int axis_index) const {
  const int n = axis_points();
  const int q = (axis_index <= n / 2) ? axis_index : axis_index - n;
  return 2.0 * std::numbers::pi * q / cells;
}

double TorusGrid::cell_distance(int cell_a, int cell_b) const {
  const auto off = cell_offset(cell_a, cell_b);
  double d2 = 0;
  for (int a = 0; a < dim; ++a) d2 += static_cast<double>(off[a]) * off[a];
  return std::sqrt(d2);
}

std::array<int, 3> TorusGrid::cell_offset(int cell_from, int cell_to) const {
  const auto ca = unflatten_cell(cell_from);
  const auto cb = unflatten_cell(cell_to);
  std::array<int, 3> off{0, 0, 0};
  for (int a = 0; a < dim; ++a) {
    int d = (cb[a] - ca[a]) % cells;
    if (d > (cells - 1) / 2) d -= cells;
    if (d < -cells / 2) d += cells;
    off[a] = d;
  }
  return off;
}

std::vector<std::int64_t> TorusGrid::points_in_cell(int cell_index) const {
  const auto c = unflatten_cell(cell_index);
  const int n = points_per_cell;
  std::vector<std::int64_t> pts;
  pts.reserve(static_cast<std::size_t>(std::pow(n, dim)));
  std::array<int, 3> p{0, 0, 0};
  const int n1 = (dim > 1) ? n : 1;
  const int n2 = (dim > 2) ? n : 1;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2) {
        p[0] = c[0] * n + i0;
        p[1] = (dim > 1) ? c[1] * n + i1 : 0;
        p[2] = (dim > 2) ? c[2] * n + i2 : 0;
        pts.push_back(flatten_point(p));
      }
  return pts;
}

}  // namespace ycl
