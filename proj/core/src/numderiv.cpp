#include "edgepost/numderiv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace edgepost {

namespace {

double central_difference(const std::function<double(double)>& f, double x, int order,
                          double h) {
  // sum_k (-1)^k C(n,k) f(x + (n/2 - k) h) / h^n; symmetric, so the error
  // series runs in even powers of h.
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= order; ++k) {
    const double offset = (0.5 * order - k) * h;
    const double term = binom * f(x + offset);
    acc += (k % 2 == 0) ? term : -term;
    binom = binom * (order - k) / (k + 1);
  }
  return acc / std::pow(h, order);
}

}  // namespace

DerivativeEstimate ridders_derivative(const std::function<double(double)>& f, double x,
                                      int order, double h0) {
  if (order == 0) return {f(x), 0.0};
  constexpr int kLevels = 12;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  constexpr double kSafe = 2.0;

  std::vector<std::vector<double>> a(kLevels, std::vector<double>(kLevels, 0.0));
  double h = h0;
  a[0][0] = central_difference(f, x, order, h);
  DerivativeEstimate best{a[0][0], std::numeric_limits<double>::max()};
  for (int i = 1; i < kLevels; ++i) {
    h /= kShrink;
    a[0][i] = central_difference(f, x, order, h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double err = std::max(std::abs(a[j][i] - a[j - 1][i]),
                                  std::abs(a[j][i] - a[j - 1][i - 1]));
      if (err <= best.error) {
        best = {a[j][i], err};
      }
    }
    // Higher order got worse by a safe margin: round-off has taken over.
    if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * best.error) break;
  }
  return best;
}

DerivativeTable finite_difference_table(const std::function<double(double)>& f, double x,
                                        double scale, double max_reach) {
  DerivativeTable out{};
  out[0] = f(x);
  for (int order = 1; order <= kLocalOrder; ++order) {
    const double half_width = std::max(0.5 * order, 0.5);
    double h0 = 0.1 * scale;
    if (std::isfinite(max_reach)) h0 = std::min(h0, 0.8 * max_reach / half_width);
    out[static_cast<std::size_t>(order)] = ridders_derivative(f, x, order, h0).value;
  }
  return out;
}

}  // namespace edgepost
