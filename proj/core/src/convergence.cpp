#include "edgepost/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "edgepost/errors.hpp"

namespace edgepost {

SlopeFit fit_loglog(std::span<const double> x, std::span<const double> y, bool drop_smallest) {
  if (x.size() != y.size()) throw DomainError("fit_loglog: x and y differ in length");
  std::size_t skip = x.size();
  if (drop_smallest && !x.empty()) {
    skip = static_cast<std::size_t>(std::min_element(x.begin(), x.end()) - x.begin());
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == skip) continue;
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_loglog needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const auto n = static_cast<double>(lx.size());
  if (lx.size() < 2) throw DomainError("fit_loglog needs at least two points");
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_loglog needs distinct x values");
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = static_cast<int>(lx.size());
  if (lx.size() > 2) {
    double rss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double r = ly[i] - fit.intercept - fit.slope * lx[i];
      rss += r * r;
    }
    fit.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  }
  return fit;
}

std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw DomainError("grid needs lo < hi and at least 2 points");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  return out;
}

double sup_error(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

double l1_error(std::span<const double> grid, std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    acc += 0.5 * (grid[i + 1] - grid[i]) * (std::abs(a[i] - b[i]) + std::abs(a[i + 1] - b[i + 1]));
  }
  return acc;
}

double trapezoid(std::span<const double> grid, std::span<const double> values) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    acc += 0.5 * (grid[i + 1] - grid[i]) * (values[i] + values[i + 1]);
  }
  return acc;
}

}  // namespace edgepost
