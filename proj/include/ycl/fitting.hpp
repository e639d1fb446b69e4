#pragma once

#include <vector>

namespace ycl {

// Ordinary least squares for y = intercept + slope * x.
struct LineFit {
  double intercept = 0;
  double slope = 0;
  double r_squared = 0;
  double residual_ss = 0;  // sum of squared residuals
  int points = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ycl
