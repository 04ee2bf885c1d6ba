#pragma once

#include <functional>
#include <span>
#include <vector>

namespace edgepost {

/// Least-squares line through (log x, log y).
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;  // standard error of the slope (0 with two points)
  int points = 0;
};

/// Fits log y against log x. With `drop_smallest`, the pair with the smallest
/// x is excluded (pre-asymptotic transient). Needs >= 2 remaining pairs with
/// positive x and y.
SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, bool drop_smallest);

std::vector<double> linspace(double lo, double hi, int points);

/// max_i |a_i - b_i|
double sup_error(std::span<const double> a, std::span<const double> b);

/// Trapezoid integral of |a - b| over the grid.
double l1_error(std::span<const double> grid, std::span<const double> a, std::span<const double> b);

double trapezoid(std::span<const double> grid, std::span<const double> values);

}  // namespace edgepost
