#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "edgepost/momentalg.hpp"
#include "edgepost/numderiv.hpp"

namespace edgepost {

/// Open parameter interval (lo, hi); either end may be infinite.
struct Support {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double theta) const noexcept { return theta > lo && theta < hi; }
  /// Distance from theta to the nearer endpoint (infinite for the real line).
  double reach(double theta) const noexcept;
};

/// Analytic derivatives of orders 0..6, used in place of finite differences.
struct DerivativeProvider {
  /// d^j/dtheta^j of (1/n) * sum_i log f(x_i | theta).
  std::function<DerivativeTable(double)> average_loglik;
  /// d^j/dtheta^j of log pi(theta).
  std::function<DerivativeTable(double)> log_prior;
};

/// One-parameter Bayesian model.
struct ModelSpec {
  std::function<double(double)> log_prior;
  std::function<double(double, double)> log_lik_term;  // (theta, observation)
  std::vector<double> data;
  Support support;
  std::optional<DerivativeProvider> derivatives;

  int n_obs() const noexcept { return static_cast<int>(data.size()); }
  double log_likelihood(double theta) const;
};

/// log pi(theta) + sum_i log f(x_i | theta). Outside the open support this is
/// -infinity; no exception is thrown.
double log_posterior_unnorm(const ModelSpec& model, double theta);

/// Derivatives of the average loglikelihood at theta (orders 0..6); zero
/// when the model has no data. Throws DerivativeError for non-interior
/// points or non-finite results.
DerivativeTable average_loglik_derivatives(const ModelSpec& model, double theta);

/// Derivatives of the log prior at theta (orders 0..6).
DerivativeTable log_prior_derivatives(const ModelSpec& model, double theta);

/// Exact posterior quantities used as ground truth.
struct PosteriorOracle {
  ModelSpec model;
  double log_norm_const = 0.0;   // log of the integral of exp(log_posterior_unnorm)
  double mean = 0.0;
  double sd = 0.0;
  CumulantVector cumulants;      // absolute cumulants of theta, orders 1..8
  MomentVector central;          // moments about the mean, orders 1..8
  double quad_tolerance = 0.0;
  double achieved_error = 0.0;   // relative error estimate of the quadrature
  bool closed_form = false;
  std::function<double(double)> pdf;  // posterior density of theta
  std::function<double(double)> cdf;  // posterior distribution function of theta

  /// Invariant cumulant kappa_j = beta_j / beta_2^{j/2}.
  double invariant_cumulant(int j) const;
};

/// Normalizing constant, mean, sd and central moments to order 8 by adaptive
/// quadrature around the posterior peak. `quad_tolerance` must lie in
/// [1e-13, 1e-6]. Throws OracleFailure if the error target is not met.
PosteriorOracle build_oracle(const ModelSpec& model, double quad_tolerance = 1e-12);

/// Unique interior maximizer of the loglikelihood.
double find_mle(const ModelSpec& model);

/// (-l''(mle))^{-1/2}: the usual standard error at the MLE.
double observed_info_sd(const ModelSpec& model, double mle);

/// Relabels the parameter as phi = scale * theta + shift. Densities pick up
/// the Jacobian; analytic derivatives are chain-ruled.
ModelSpec affine_reparameterize(const ModelSpec& model, double scale, double shift);

}  // namespace edgepost
