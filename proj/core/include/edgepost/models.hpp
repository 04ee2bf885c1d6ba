#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "edgepost/posterior.hpp"

namespace edgepost {

enum class ModelFamily { beta_binomial, normal_normal, gamma_exponential };

std::string_view to_string(ModelFamily family);
std::optional<ModelFamily> parse_family(std::string_view name);

/// A conjugate family plus hyperparameters and sufficient statistics.
///
///   beta-binomial      prior Beta(a, b) on a success probability;
///                      n Bernoulli trials with `statistic` = x successes.
///   normal-normal      prior N(mu0, tau2) on a mean (tau2 = inf: flat);
///                      n observations with known variance sigma2 and
///                      `statistic` = sample mean.
///   gamma-exponential  prior Gamma(shape, rate) on an exponential rate;
///                      n observations with `statistic` = their sum.
struct BuiltinModel {
  ModelFamily family = ModelFamily::beta_binomial;
  std::map<std::string, double> hyperparameters;
  int n = 0;
  double statistic = 0.0;

  double hyper(const std::string& name) const;
};

BuiltinModel beta_binomial(double a, double b, int n, int x);
BuiltinModel normal_normal(double mu0, double tau2, double sigma2, int n, double xbar);
BuiltinModel gamma_exponential(double shape, double rate, int n, double sum);

/// Throws ValidationError listing every violated admissibility condition.
void validate(const BuiltinModel& model);

/// Same family and hyperparameters with n observations, data scaled by `ratio`:
/// x = round(ratio * n) successes, sample mean = ratio, or sum = ratio * n.
BuiltinModel with_sample_size(const BuiltinModel& model, int n, double ratio);

/// ModelSpec with analytic derivative providers of orders 1..6.
ModelSpec instantiate(const BuiltinModel& model);

/// Closed-form conjugate posterior; independent of any quadrature.
PosteriorOracle exact_posterior(const BuiltinModel& model);

}  // namespace edgepost
