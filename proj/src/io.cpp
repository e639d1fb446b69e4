#include "ycl/io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>

#include "ycl/errors.hpp"

namespace ycl {

static_assert(std::endian::native == std::endian::little,
              "field binaries are little-endian; byte swapping is not implemented");

void write_field_binary(const std::filesystem::path& path, const ScalarField& f, double mass) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  const std::int32_t header[3] = {f.grid().dim, f.grid().cells, f.grid().points_per_cell};
  out.write(reinterpret_cast<const char*>(header), sizeof(header));
  out.write(reinterpret_cast<const char*>(&mass), sizeof(mass));
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.values().size() * sizeof(double)));
  if (!out) fail(ErrorCode::io_error, "short write to " + path.string());
}

ScalarField read_field_binary(const std::filesystem::path& path, double* mass_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot open " + path.string());
  std::int32_t header[3];
  double mass;
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  in.read(reinterpret_cast<char*>(&mass), sizeof(mass));
  TorusGrid grid{header[0], header[1], header[2]};
  grid.validate();
  Eigen::ArrayXd values(grid.total_points());
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!in) fail(ErrorCode::io_error, "truncated field binary " + path.string());
  if (mass_out) *mass_out = mass;
  return ScalarField(grid, std::move(values));
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  const TorusGrid& grid = f.grid();
  out << "i0";
  for (int a = 1; a < grid.dim; ++a) out << ",i" << a;
  out << ",value\n";
  out.precision(17);
  for (std::int64_t idx = 0; idx < grid.total_points(); ++idx) {
    const auto p = grid.unflatten_point(idx);
    out << p[0];
    for (int a = 1; a < grid.dim; ++a) out << ',' << p[a];
    out << ',' << f(idx) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) fail(ErrorCode::io_error, "short write to " + path.string());
}

}  // namespace ycl
