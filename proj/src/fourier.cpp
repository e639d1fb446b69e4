#include "ycl/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "ycl/errors.hpp"

namespace ycl {

namespace {

// FFTW planning is not thread-safe; executing a cached plan on fresh buffers
// is. Plans are created once per (dims, direction) with FFTW_ESTIMATE, which
// keeps planning deterministic.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  void execute(const TorusGrid& grid, int sign, fftw_complex* buf) {
    fftw_plan plan = nullptr;
    {
      std::scoped_lock lock(mutex_);
      const Key key{grid.dim, grid.axis_points(), sign};
      auto it = plans_.find(key);
      if (it == plans_.end()) {
        std::vector<int> dims(grid.dim, grid.axis_points());
        fftw_complex* proto = fftw_alloc_complex(grid.total_points());
        plan = fftw_plan_dft(grid.dim, dims.data(), proto, proto, sign, FFTW_ESTIMATE);
        fftw_free(proto);
        plans_.emplace(key, plan);
      } else {
        plan = it->second;
      }
    }
    fftw_execute_dft(plan, buf, buf);
  }

 private:
  using Key = std::tuple<int, int, int>;
  std::mutex mutex_;
  std::map<Key, fftw_plan> plans_;
};

struct FftwBuffer {
  explicit FftwBuffer(std::int64_t n) : data(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

}  // namespace

Eigen::ArrayXd multiplier_values(const TorusGrid& grid, const MultiplierFn& mult) {
  const std::int64_t total = grid.total_points();
  Eigen::ArrayXd values(total);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const auto p = grid.unflatten_point(idx);
    std::array<double, 3> k{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim; ++a) k[a] = grid.frequency(p[a]);
    values(idx) = mult(k);
  }
  return values;
}

Eigen::ArrayXd apply_multiplier(const TorusGrid& grid, const Eigen::ArrayXd& in,
                                const Eigen::ArrayXd& mode_values) {
  const std::int64_t total = grid.total_points();
  if (in.size() != total || mode_values.size() != total)
    fail(ErrorCode::grid_mismatch, "apply_multiplier: size mismatch");
  FftwBuffer buf(total);
  for (std::int64_t i = 0; i < total; ++i) {
    buf.data[i][0] = in(i);
    buf.data[i][1] = 0.0;
  }
  PlanCache::instance().execute(grid, FFTW_FORWARD, buf.data);
  for (std::int64_t i = 0; i < total; ++i) {
    buf.data[i][0] *= mode_values(i);
    buf.data[i][1] *= mode_values(i);
  }
  PlanCache::instance().execute(grid, FFTW_BACKWARD, buf.data);
  Eigen::ArrayXd out(total);
  const double scale = 1.0 / static_cast<double>(total);
  for (std::int64_t i = 0; i < total; ++i) out(i) = buf.data[i][0] * scale;
  return out;
}

Eigen::ArrayXd apply_multiplier(const TorusGrid& grid, const Eigen::ArrayXd& in,
                                const MultiplierFn& mult) {
  return apply_multiplier(grid, in, multiplier_values(grid, mult));
}

Eigen::ArrayXcd fourier_coefficients(const TorusGrid& grid, const Eigen::ArrayXd& in) {
  const std::int64_t total = grid.total_points();
  if (in.size() != total) fail(ErrorCode::grid_mismatch, "fourier_coefficients: size mismatch");
  FftwBuffer buf(total);
  for (std::int64_t i = 0; i < total; ++i) {
    buf.data[i][0] = in(i);
    buf.data[i][1] = 0.0;
  }
  PlanCache::instance().execute(grid, FFTW_FORWARD, buf.data);
  Eigen::ArrayXcd out(total);
  const double w = grid.point_weight();
  for (std::int64_t i = 0; i < total; ++i)
    out(i) = std::complex<double>(buf.data[i][0], buf.data[i][1]) * w;
  return out;
}

Eigen::MatrixXd multiplier_matrix(const TorusGrid& grid, const MultiplierFn& mult) {
  const std::int64_t total = grid.total_points();
  // Stencil t(r) = (1/N) sum_k m(k) e^{ik.r}; real for even multipliers.
  Eigen::ArrayXd delta = Eigen::ArrayXd::Zero(total);
  delta(0) = 1.0;
  const Eigen::ArrayXd stencil = apply_multiplier(grid, delta, mult);
  Eigen::MatrixXd mat(total, total);
  const int n = grid.axis_points();
  for (std::int64_t row = 0; row < total; ++row) {
    const auto pr = grid.unflatten_point(row);
    for (std::int64_t col = 0; col < total; ++col) {
      const auto pc = grid.unflatten_point(col);
      std::array<int, 3> off{0, 0, 0};
      for (int a = 0; a < grid.dim; ++a) off[a] = ((pr[a] - pc[a]) % n + n) % n;
      mat(row, col) = stencil(grid.flatten_point(off));
    }
  }
  return mat;
}

}  // namespace ycl
