#include "ycl/test_function.hpp"

#include <cmath>

#include "ycl/errors.hpp"

namespace ycl {

TestFunction TestFunction::gaussian(double center, double width) {
  if (!(width > 0)) fail(ErrorCode::config_invalid, "test function: width must be > 0");
  return TestFunction(center, width, {1.0});
}

TestFunction TestFunction::gaussian_derivative(double center, double width) {
  return gaussian(center, width).derivative();
}

TestFunction TestFunction::polynomial_damped(double center, double width, int degree) {
  if (degree < 0) fail(ErrorCode::config_invalid, "test function: degree must be >= 0");
  std::vector<double> poly(degree + 1, 0.0);
  poly[degree] = 1.0;
  if (!(width > 0)) fail(ErrorCode::config_invalid, "test function: width must be > 0");
  return TestFunction(center, width, std::move(poly));
}

TestFunction TestFunction::from_family(const std::string& family, double center, double width,
                                       int degree) {
  if (family == "gaussian") return gaussian(center, width);
  if (family == "gaussian_derivative") return gaussian_derivative(center, width);
  if (family == "polynomial_damped") return polynomial_damped(center, width, degree);
  fail(ErrorCode::config_invalid, "test function: unknown family '" + family + "'");
}

double TestFunction::operator()(double x) const {
  const double t = x - center_;
  double p = 0;
  for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) p = p * t + *it;
  return p * std::exp(-t * t / (2.0 * width_ * width_));
}

TestFunction TestFunction::derivative() const {
  // (P e^{-t^2/2w^2})' = (P' - t P / w^2) e^{-t^2/2w^2}
  const double inv_w2 = 1.0 / (width_ * width_);
  std::vector<double> out(poly_.size() + 1, 0.0);
  for (std::size_t j = 1; j < poly_.size(); ++j) out[j - 1] += j * poly_[j];
  for (std::size_t j = 0; j < poly_.size(); ++j) out[j + 1] -= inv_w2 * poly_[j];
  while (out.size() > 1 && out.back() == 0.0) out.pop_back();
  return TestFunction(center_, width_, std::move(out));
}

double TestFunction::seminorm(int alpha, int beta, int samples) const {
  TestFunction d = *this;
  for (int b = 0; b < beta; ++b) d = d.derivative();
  // Sample far enough into the tails: the gaussian factor makes everything
  // negligible beyond ~12 widths plus the polynomial turnover.
  const double half_span = std::max(12.0 * width_ * std::sqrt(1.0 + alpha + beta), 8.0);
  double best = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = center_ - half_span + 2.0 * half_span * i / (samples - 1);
    best = std::max(best, std::abs(std::pow(x, alpha) * d(x)));
  }
  return best;
}

}  // namespace ycl
