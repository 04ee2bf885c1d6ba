#include "edgepost/laplace.hpp"

#include <cmath>
#include <string>

#include "edgepost/errors.hpp"
#include "peak.hpp"

namespace edgepost {

bool LocalExpansion::is_gaussian() const noexcept {
  if (!(p[2] < 0.0)) return false;
  const double sd = 1.0 / std::sqrt(-p[2]);
  double scale = sd * sd;
  for (int j = 3; j <= kLocalOrder; ++j) {
    scale *= sd;
    if (std::abs(p[static_cast<std::size_t>(j)]) * scale > 1e-13) return false;
  }
  return true;
}

LocalExpansion expand_local(const ModelSpec& model, double center) {
  const DerivativeTable lik = average_loglik_derivatives(model, center);
  const DerivativeTable prior = log_prior_derivatives(model, center);
  LocalExpansion le;
  le.center = center;
  le.n_obs = model.n_obs();
  for (std::size_t j = 0; j < le.p.size(); ++j) {
    le.g[j] = -lik[j];
    le.h[j] = -prior[j];
    le.p[j] = -le.h[j] - le.n_obs * le.g[j];
  }
  return le;
}

std::vector<double> omega_poly(const LocalExpansion& le, int k) {
  if (k < 2 || k > kLocalOrder) {
    throw UnsupportedOrderError("omega truncation order must lie in [2, " +
                                std::to_string(kLocalOrder) + "], got " + std::to_string(k));
  }
  const std::size_t len = static_cast<std::size_t>(k) + 1;
  // Exponent: p1 t + sum_{j>=3} p_j t^j / j!, no constant or quadratic part.
  std::vector<double> q(len, 0.0);
  q[1] = le.p[1];
  double fact = 2.0;
  for (std::size_t j = 3; j < len; ++j) {
    fact *= static_cast<double>(j);
    q[j] = le.p[j] / fact;
  }
  std::vector<double> result(len, 0.0);
  std::vector<double> term(len, 0.0);
  result[0] = 1.0;
  term[0] = 1.0;
  for (int m = 1; m <= k; ++m) {
    std::vector<double> next(len, 0.0);
    for (std::size_t a = 0; a < len; ++a) {
      if (term[a] == 0.0) continue;
      for (std::size_t b = 1; a + b < len; ++b) next[a + b] += term[a] * q[b];
    }
    for (auto& c : next) c /= m;
    term = std::move(next);
    for (std::size_t i = 0; i < len; ++i) result[i] += term[i];
  }
  return result;
}

std::vector<double> omega_poly_by_order(const LocalExpansion& le, int k) {
  if (k < 2 || k > kLocalOrder) {
    throw UnsupportedOrderError("omega truncation order must lie in [2, " +
                                std::to_string(kLocalOrder) + "], got " + std::to_string(k));
  }
  // Size of p1 t is n^{-1/2}, of p_j t^j (j >= 3) n^{-(j-2)/2}; keep products
  // up to n^{-(k-2)/2}.
  const int max_weight = k - 2;
  struct Piece {
    int degree;
    int weight;
    double value;
  };
  std::vector<Piece> pieces = {{1, 1, le.p[1]}};
  double fact = 2.0;
  for (int j = 3; j <= kLocalOrder; ++j) {
    fact *= j;
    if (j - 2 <= max_weight) pieces.push_back({j, j - 2, le.p[static_cast<std::size_t>(j)] / fact});
  }
  const std::size_t len = static_cast<std::size_t>(3 * max_weight) + 1;
  const auto w_len = static_cast<std::size_t>(max_weight) + 1;
  // table[w][d]: coefficient of t^d among products of total weight w.
  using Table = std::vector<std::vector<double>>;
  Table term(w_len, std::vector<double>(len, 0.0));
  Table result = term;
  term[0][0] = 1.0;
  result[0][0] = 1.0;
  for (int m = 1; m <= max_weight; ++m) {
    Table next(w_len, std::vector<double>(len, 0.0));
    for (std::size_t w = 0; w < w_len; ++w) {
      for (std::size_t d = 0; d < len; ++d) {
        if (term[w][d] == 0.0) continue;
        for (const auto& pc : pieces) {
          const std::size_t nw = w + static_cast<std::size_t>(pc.weight);
          const std::size_t nd = d + static_cast<std::size_t>(pc.degree);
          if (nw < w_len && nd < len) next[nw][nd] += term[w][d] * pc.value / m;
        }
      }
    }
    term = std::move(next);
    for (std::size_t w = 0; w < w_len; ++w) {
      for (std::size_t d = 0; d < len; ++d) result[w][d] += term[w][d];
    }
  }
  std::vector<double> omega(len, 0.0);
  for (std::size_t w = 0; w < w_len; ++w) {
    for (std::size_t d = 0; d < len; ++d) omega[d] += result[w][d];
  }
  while (omega.size() > 1 && omega.back() == 0.0) omega.pop_back();
  return omega;
}

MomentVector laplace_moments(const LocalExpansion& le, int k) {
  if (!le.has_negative_curvature()) {
    throw CurvatureError("log posterior curvature at " + std::to_string(le.center) +
                         " is not negative (p2 = " + std::to_string(le.p[2]) + ")");
  }
  const double variance = -1.0 / le.p[2];
  const std::vector<double> omega = omega_poly_by_order(le, k);
  const double mass = gaussian_poly_integral(omega, 0.0, variance, 0);
  if (!(mass > 0.0)) {
    throw CurvatureError("extended Laplace approximation has non-positive mass");
  }
  MomentVector m;
  m.about = le.center;
  m.values.resize(kLocalOrder);
  for (int j = 1; j <= kLocalOrder; ++j) {
    m.values[static_cast<std::size_t>(j) - 1] = gaussian_poly_integral(omega, 0.0, variance, j) / mass;
  }
  return m;
}

namespace {

double starting_center(const ModelSpec& model) {
  try {
    return find_mle(model);
  } catch (const BoundaryMaximumError&) {
    // No interior MLE (e.g. zero successes): start from the posterior peak.
    const auto peak = detail::locate_peak([&](double t) { return log_posterior_unnorm(model, t); },
                                          model.support);
    if (peak.at_boundary) throw;
    return peak.argmax;
  }
}

LaplaceCumulants cumulants_at(const LocalExpansion& le, int k) {
  LaplaceCumulants out;
  out.expansion = le;
  out.beta.values.assign(5, 0.0);
  if (le.is_gaussian()) {
    out.gaussian_shortcut = true;
    out.beta.values[0] = le.center - le.p[1] / le.p[2];
    out.beta.values[1] = -1.0 / le.p[2];
  } else {
    const CumulantVector all = moments_to_cumulants(laplace_moments(le, k));
    for (std::size_t j = 0; j < 5; ++j) out.beta.values[j] = all.values[j];
  }
  const double b2 = out.beta(2);
  if (!(b2 > 0.0)) {
    throw CurvatureError("extended Laplace variance is not positive");
  }
  out.kappa3 = out.beta(3) / std::pow(b2, 1.5);
  out.kappa4 = out.beta(4) / (b2 * b2);
  out.kappa5 = out.beta(5) / std::pow(b2, 2.5);
  out.order_certificate = {{3, -0.5}, {4, -1.0}, {5, -1.5}};
  return out;
}

}  // namespace

LaplaceCumulants laplace_cumulants(const ModelSpec& model, const LaplaceOptions& options) {
  if (options.centering == LaplaceCentering::oracle) {
    auto out = cumulants_at(expand_local(model, options.oracle_mean), options.k);
    out.center_trace = {options.oracle_mean};
    return out;
  }
  std::vector<double> trace;
  double center = starting_center(model);
  for (int it = 0; it < options.max_iterations; ++it) {
    trace.push_back(center);
    LaplaceCumulants out = cumulants_at(expand_local(model, center), options.k);
    const double next = out.beta(1);
    const double sd = std::sqrt(out.beta(2));
    if (std::abs(next - center) < options.center_tolerance * sd) {
      out.center_trace = std::move(trace);
      return out;
    }
    if (!model.support.contains(next)) break;
    center = next;
  }
  throw CenteringError("Laplace centering did not converge in " +
                           std::to_string(options.max_iterations) + " iterations",
                       std::move(trace));
}

}  // namespace edgepost
