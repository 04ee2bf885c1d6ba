#include "edgepost/specialfn.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "edgepost/errors.hpp"

namespace edgepost {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxHermiteDegree) {
    throw UnsupportedOrderError("Hermite degree " + std::to_string(degree) +
                                " outside supported range [0, " +
                                std::to_string(kMaxHermiteDegree) + "]");
  }
}

}  // namespace

double HermitePoly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

HermitePoly hermite(int degree) {
  check_degree(degree);
  // Coefficient-level recurrence: He_{j+1} = x He_j - j He_{j-1}.
  std::vector<double> prev{1.0};
  if (degree == 0) return {0, prev};
  std::vector<double> cur{0.0, 1.0};
  for (int j = 1; j < degree; ++j) {
    std::vector<double> next(static_cast<std::size_t>(j) + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= j * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {degree, cur};
}

double hermite_eval(int degree, double x) {
  check_degree(degree);
  if (degree == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < degree; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<double> hermite_values(int max_degree, double x) {
  check_degree(max_degree);
  std::vector<double> out(static_cast<std::size_t>(max_degree) + 1);
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = x;
  for (int j = 1; j < max_degree; ++j) {
    out[j + 1] = x * out[j] - j * out[j - 1];
  }
  return out;
}

double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343819;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
  // erfc keeps full relative accuracy in the lower tail, where 1 - erf would not.
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace edgepost
