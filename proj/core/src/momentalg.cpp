#include "edgepost/momentalg.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "edgepost/errors.hpp"

namespace edgepost {

namespace {

// One integer partition of n with the integer coefficients of its term in
// the Bell-polynomial relations:
//   moment_n   = sum  set_partitions * prod kappa_part
//   cumulant_n = sum  set_partitions * (-1)^(b-1) (b-1)! * prod moment_part
struct PartitionTerm {
  std::vector<int> parts;
  std::int64_t set_partitions = 0;
  std::int64_t cumulant_coefficient = 0;
};

using PartitionTable = std::array<std::vector<PartitionTerm>, kMaxMomentOrder + 1>;

std::int64_t factorial(int n) {
  std::int64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void enumerate_partitions(int remaining, int max_part, std::vector<int>& parts,
                          std::vector<PartitionTerm>& out, int n) {
  if (remaining == 0) {
    // n! / prod (part!)^{k_i} k_i!
    std::int64_t denom = 1;
    std::array<int, kMaxMomentOrder + 1> mult{};
    for (int p : parts) {
      denom *= factorial(p);
      ++mult[static_cast<std::size_t>(p)];
    }
    for (int k : mult) denom *= factorial(k);
    PartitionTerm term;
    term.parts = parts;
    term.set_partitions = factorial(n) / denom;
    const int blocks = static_cast<int>(parts.size());
    const std::int64_t sign = (blocks % 2 == 1) ? 1 : -1;
    term.cumulant_coefficient = sign * factorial(blocks - 1) * term.set_partitions;
    out.push_back(std::move(term));
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    parts.push_back(p);
    enumerate_partitions(remaining - p, p, parts, out, n);
    parts.pop_back();
  }
}

const PartitionTable& partition_table() {
  static const PartitionTable table = [] {
    PartitionTable t;
    for (int n = 1; n <= kMaxMomentOrder; ++n) {
      std::vector<int> parts;
      enumerate_partitions(n, n, parts, t[static_cast<std::size_t>(n)], n);
    }
    return t;
  }();
  return table;
}

void check_order(int order) {
  if (order < 2) {
    throw InsufficientOrderError("moment/cumulant conversion needs order >= 2, got " +
                                 std::to_string(order));
  }
  if (order > kMaxMomentOrder) {
    throw UnsupportedOrderError("moment/cumulant conversion tabulated to order " +
                                std::to_string(kMaxMomentOrder) + ", got " +
                                std::to_string(order));
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

CumulantVector moments_to_cumulants(const MomentVector& m) {
  const int order = m.max_order();
  check_order(order);
  const auto& table = partition_table();
  CumulantVector out;
  out.values.resize(static_cast<std::size_t>(order));
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (const auto& term : table[static_cast<std::size_t>(n)]) {
      double prod = static_cast<double>(term.cumulant_coefficient);
      for (int p : term.parts) prod *= m(p);
      acc += prod;
    }
    out.values[static_cast<std::size_t>(n) - 1] = acc;
  }
  out.values[0] += m.about;
  return out;
}

MomentVector cumulants_to_moments(const CumulantVector& c, double about) {
  const int order = c.max_order();
  check_order(order);
  const auto& table = partition_table();
  std::vector<double> shifted = c.values;
  shifted[0] -= about;
  MomentVector out;
  out.about = about;
  out.values.resize(static_cast<std::size_t>(order));
  for (int n = 1; n <= order; ++n) {
    double acc = 0.0;
    for (const auto& term : table[static_cast<std::size_t>(n)]) {
      double prod = static_cast<double>(term.set_partitions);
      for (int p : term.parts) prod *= shifted[static_cast<std::size_t>(p) - 1];
      acc += prod;
    }
    out.values[static_cast<std::size_t>(n) - 1] = acc;
  }
  return out;
}

MomentVector shift_moments(const MomentVector& m, double new_about) {
  // E[(X - b)^n] = sum_k C(n,k) E[(X - a)^k] (a - b)^(n-k)
  const double d = m.about - new_about;
  MomentVector out;
  out.about = new_about;
  out.values.resize(m.values.size());
  for (int n = 1; n <= m.max_order(); ++n) {
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) acc += binomial(n, k) * m(k) * std::pow(d, n - k);
    out.values[static_cast<std::size_t>(n) - 1] = acc;
  }
  return out;
}

MomentVector central_moments(const MomentVector& m) {
  if (m.max_order() < 1) return m;
  MomentVector out = shift_moments(m, m.about + m(1));
  out.values[0] = 0.0;
  return out;
}

double gaussian_central_moment(int order, double variance) {
  if (order < 0) throw DomainError("negative moment order");
  if (!(variance > 0.0)) throw DomainError("gaussian moment needs a positive variance");
  if (order % 2 == 1) return 0.0;
  double r = 1.0;
  for (int k = order - 1; k > 1; k -= 2) r *= k;
  return r * std::pow(variance, order / 2);
}

double gaussian_poly_integral(std::span<const double> poly, double mean, double variance,
                              int power_shift) {
  if (!(variance > 0.0)) {
    throw DomainError("gaussian_poly_integral requires positive variance");
  }
  if (power_shift < 0) throw DomainError("power shift must be non-negative");
  const int degree = static_cast<int>(poly.size()) - 1;
  if (degree + power_shift > 20) {
    throw UnsupportedOrderError("gaussian_poly_integral supports total degree <= 20");
  }
  if (poly.empty()) return 0.0;
  // theta^s = sum_i C(s,i) mean^(s-i) x^i with x = theta - mean.
  std::vector<double> shift(static_cast<std::size_t>(power_shift) + 1);
  for (int i = 0; i <= power_shift; ++i) {
    shift[static_cast<std::size_t>(i)] = binomial(power_shift, i) * std::pow(mean, power_shift - i);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < shift.size(); ++i) {
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const int deg = static_cast<int>(i + j);
      if (deg % 2 == 1) continue;
      acc += shift[i] * poly[j] * gaussian_central_moment(deg, variance);
    }
  }
  return acc;
}

}  // namespace edgepost
