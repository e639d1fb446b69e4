#pragma once

#include <string>
#include <vector>

namespace ycl {

// Rapidly decaying test function phi(x) = P(x - c) * exp(-(x - c)^2 / (2 w^2))
// with P a polynomial. Closed under differentiation, which keeps derivative
// evaluation exact (no finite differences) for the Schwartz seminorms
// N_{alpha,beta}(phi) = sup_x |x^alpha phi^(beta)(x)|.
class TestFunction {
 public:
  static TestFunction gaussian(double center, double width);
  static TestFunction gaussian_derivative(double center, double width);
  static TestFunction polynomial_damped(double center, double width, int degree);
  static TestFunction from_family(const std::string& family, double center, double width,
                                  int degree);

  double operator()(double x) const;
  TestFunction derivative() const;

  // sup_x |x^alpha phi^(beta)| estimated on a wide sampling grid.
  double seminorm(int alpha, int beta, int samples = 20001) const;

  double center() const { return center_; }
  double width() const { return width_; }

 private:
  TestFunction(double center, double width, std::vector<double> poly)
      : center_(center), width_(width), poly_(std::move(poly)) {}

  double center_ = 0.0;
  double width_ = 1.0;
  std::vector<double> poly_;  // coefficients in powers of (x - c)
};

}  // namespace ycl
