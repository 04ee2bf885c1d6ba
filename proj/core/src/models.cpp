#include "edgepost/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>

#include "edgepost/errors.hpp"

namespace edgepost {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d^j/dt^j log t, j >= 1.
double dlog(int j, double t) {
  double f = 1.0;
  for (int k = 2; k < j; ++k) f *= k;
  return ((j % 2 == 1) ? f : -f) / std::pow(t, j);
}

// d^j/dt^j log(1 - t), j >= 1.
double dlog1m(int j, double t) {
  double f = 1.0;
  for (int k = 2; k < j; ++k) f *= k;
  return -f / std::pow(1.0 - t, j);
}

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Central moments of Beta(alpha, beta) via the Stein-type recurrence
//   mu_{k+1} = k (m(1-m) mu_{k-1} + (1-2m) mu_k) / (alpha + beta + k),
// which avoids the cancellation of raw-moment formulas at large alpha + beta.
MomentVector beta_central_moments(double alpha, double beta) {
  const double s = alpha + beta;
  const double m = alpha / s;
  MomentVector out;
  out.about = m;
  out.values.assign(kMaxMomentOrder, 0.0);
  double prev = 1.0;  // mu_0
  double cur = 0.0;   // mu_1
  for (int k = 1; k < kMaxMomentOrder; ++k) {
    const double next = k * (m * (1.0 - m) * prev + (1.0 - 2.0 * m) * cur) / (s + k);
    out.values[static_cast<std::size_t>(k)] = next;
    prev = cur;
    cur = next;
  }
  return out;
}

template <class Dist>
void attach_distribution(PosteriorOracle& oracle, Dist dist, double lo, double hi) {
  oracle.pdf = [dist, lo, hi](double t) {
    if (!(t > lo && t < hi)) return 0.0;
    return boost::math::pdf(dist, t);
  };
  oracle.cdf = [dist, lo, hi](double t) {
    if (!(t > lo)) return 0.0;
    if (!(t < hi)) return 1.0;
    return boost::math::cdf(dist, t);
  };
}

}  // namespace

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::beta_binomial:
      return "beta-binomial";
    case ModelFamily::normal_normal:
      return "normal-normal";
    case ModelFamily::gamma_exponential:
      return "gamma-exponential";
  }
  return "unknown";
}

std::optional<ModelFamily> parse_family(std::string_view name) {
  if (name == "beta-binomial") return ModelFamily::beta_binomial;
  if (name == "normal-normal") return ModelFamily::normal_normal;
  if (name == "gamma-exponential") return ModelFamily::gamma_exponential;
  return std::nullopt;
}

double BuiltinModel::hyper(const std::string& name) const {
  const auto it = hyperparameters.find(name);
  if (it == hyperparameters.end()) {
    throw ValidationError({"missing hyperparameter '" + name + "' for " +
                           std::string(to_string(family))});
  }
  return it->second;
}

BuiltinModel beta_binomial(double a, double b, int n, int x) {
  return {ModelFamily::beta_binomial, {{"a", a}, {"b", b}}, n, static_cast<double>(x)};
}

BuiltinModel normal_normal(double mu0, double tau2, double sigma2, int n, double xbar) {
  return {ModelFamily::normal_normal, {{"mu0", mu0}, {"tau2", tau2}, {"sigma2", sigma2}}, n, xbar};
}

BuiltinModel gamma_exponential(double shape, double rate, int n, double sum) {
  return {ModelFamily::gamma_exponential, {{"shape", shape}, {"rate", rate}}, n, sum};
}

void validate(const BuiltinModel& model) {
  std::vector<std::string> v;
  const auto need = [&](const std::string& key) -> std::optional<double> {
    const auto it = model.hyperparameters.find(key);
    if (it == model.hyperparameters.end()) {
      v.push_back("missing hyperparameter '" + key + "'");
      return std::nullopt;
    }
    if (std::isnan(it->second)) {
      v.push_back(key + " is NaN");
      return std::nullopt;
    }
    return it->second;
  };
  if (model.n < 0) v.push_back("n must be >= 0 (got " + std::to_string(model.n) + ")");
  switch (model.family) {
    case ModelFamily::beta_binomial: {
      const auto a = need("a");
      const auto b = need("b");
      if (a && !(*a > 0.0 && std::isfinite(*a))) v.push_back("a must be finite and > 0 (got " + fmt(*a) + ")");
      if (b && !(*b > 0.0 && std::isfinite(*b))) v.push_back("b must be finite and > 0 (got " + fmt(*b) + ")");
      const double x = model.statistic;
      if (!(x >= 0.0 && x <= model.n)) v.push_back("x must satisfy 0 <= x <= n (got x=" + fmt(x) + ")");
      if (x != std::floor(x)) v.push_back("x must be an integer (got " + fmt(x) + ")");
      break;
    }
    case ModelFamily::normal_normal: {
      const auto mu0 = need("mu0");
      const auto tau2 = need("tau2");
      const auto sigma2 = need("sigma2");
      if (mu0 && !std::isfinite(*mu0)) v.push_back("mu0 must be finite");
      if (tau2 && !(*tau2 > 0.0)) v.push_back("tau2 must be > 0 (inf for a flat prior; got " + fmt(*tau2) + ")");
      if (sigma2 && !(*sigma2 > 0.0 && std::isfinite(*sigma2))) v.push_back("sigma2 must be finite and > 0 (got " + fmt(*sigma2) + ")");
      if (!std::isfinite(model.statistic)) v.push_back("sample mean must be finite");
      if (tau2 && std::isinf(*tau2) && model.n < 1) v.push_back("flat prior needs n >= 1 for a proper posterior");
      break;
    }
    case ModelFamily::gamma_exponential: {
      const auto shape = need("shape");
      const auto rate = need("rate");
      if (shape && !(*shape > 0.0 && std::isfinite(*shape))) v.push_back("shape must be finite and > 0 (got " + fmt(*shape) + ")");
      if (rate && !(*rate > 0.0 && std::isfinite(*rate))) v.push_back("rate must be finite and > 0 (got " + fmt(*rate) + ")");
      if (!(model.statistic >= 0.0 && std::isfinite(model.statistic))) v.push_back("sum of observations must be finite and >= 0");
      if (model.n == 0 && model.statistic != 0.0) v.push_back("sum must be 0 when n = 0");
      break;
    }
  }
  if (!v.empty()) throw ValidationError(std::move(v));
}

BuiltinModel with_sample_size(const BuiltinModel& model, int n, double ratio) {
  BuiltinModel out = model;
  out.n = n;
  switch (model.family) {
    case ModelFamily::beta_binomial:
      out.statistic = std::round(ratio * n);
      break;
    case ModelFamily::normal_normal:
      out.statistic = ratio;
      break;
    case ModelFamily::gamma_exponential:
      out.statistic = ratio * n;
      break;
  }
  return out;
}

ModelSpec instantiate(const BuiltinModel& model) {
  validate(model);
  ModelSpec spec;
  const int n = model.n;
  switch (model.family) {
    case ModelFamily::beta_binomial: {
      const double a = model.hyper("a");
      const double b = model.hyper("b");
      const double x = model.statistic;
      const double log_beta = std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
      spec.support = {0.0, 1.0};
      spec.log_prior = [=](double t) { return xlogy(a - 1.0, t) + xlogy(b - 1.0, 1.0 - t) - log_beta; };
      spec.log_lik_term = [](double t, double y) { return xlogy(y, t) + xlogy(1.0 - y, 1.0 - t); };
      spec.data.assign(static_cast<std::size_t>(n), 0.0);
      std::fill_n(spec.data.begin(), static_cast<std::size_t>(x), 1.0);
      const double frac = n > 0 ? x / n : 0.0;
      DerivativeProvider p;
      p.average_loglik = [frac](double t) {
        DerivativeTable d{};
        d[0] = xlogy(frac, t) + xlogy(1.0 - frac, 1.0 - t);
        for (int j = 1; j <= kLocalOrder; ++j) d[j] = frac * dlog(j, t) + (1.0 - frac) * dlog1m(j, t);
        return d;
      };
      p.log_prior = [=](double t) {
        DerivativeTable d{};
        d[0] = xlogy(a - 1.0, t) + xlogy(b - 1.0, 1.0 - t) - log_beta;
        for (int j = 1; j <= kLocalOrder; ++j) d[j] = (a - 1.0) * dlog(j, t) + (b - 1.0) * dlog1m(j, t);
        return d;
      };
      spec.derivatives = std::move(p);
      break;
    }
    case ModelFamily::normal_normal: {
      const double mu0 = model.hyper("mu0");
      const double tau2 = model.hyper("tau2");
      const double sigma2 = model.hyper("sigma2");
      const double xbar = model.statistic;
      const bool flat = std::isinf(tau2);
      const double log_norm_prior = flat ? 0.0 : -0.5 * std::log(2.0 * std::numbers::pi * tau2);
      const double log_norm_lik = -0.5 * std::log(2.0 * std::numbers::pi * sigma2);
      spec.support = {-kInf, kInf};
      spec.log_prior = [=](double t) {
        return flat ? 0.0 : log_norm_prior - 0.5 * (t - mu0) * (t - mu0) / tau2;
      };
      spec.log_lik_term = [=](double t, double y) {
        return log_norm_lik - 0.5 * (y - t) * (y - t) / sigma2;
      };
      spec.data.assign(static_cast<std::size_t>(n), xbar);
      DerivativeProvider p;
      p.average_loglik = [=](double t) {
        DerivativeTable d{};
        d[0] = log_norm_lik - 0.5 * (xbar - t) * (xbar - t) / sigma2;
        d[1] = (xbar - t) / sigma2;
        d[2] = -1.0 / sigma2;
        return d;
      };
      p.log_prior = [=](double t) {
        DerivativeTable d{};
        if (flat) return d;
        d[0] = log_norm_prior - 0.5 * (t - mu0) * (t - mu0) / tau2;
        d[1] = -(t - mu0) / tau2;
        d[2] = -1.0 / tau2;
        return d;
      };
      spec.derivatives = std::move(p);
      break;
    }
    case ModelFamily::gamma_exponential: {
      const double shape = model.hyper("shape");
      const double rate = model.hyper("rate");
      const double ybar = n > 0 ? model.statistic / n : 0.0;
      const double log_norm = shape * std::log(rate) - std::lgamma(shape);
      spec.support = {0.0, kInf};
      spec.log_prior = [=](double t) { return log_norm + xlogy(shape - 1.0, t) - rate * t; };
      spec.log_lik_term = [](double t, double y) { return std::log(t) - t * y; };
      spec.data.assign(static_cast<std::size_t>(n), ybar);
      DerivativeProvider p;
      p.average_loglik = [ybar](double t) {
        DerivativeTable d{};
        d[0] = std::log(t) - t * ybar;
        for (int j = 1; j <= kLocalOrder; ++j) d[j] = dlog(j, t);
        d[1] -= ybar;
        return d;
      };
      p.log_prior = [=](double t) {
        DerivativeTable d{};
        d[0] = log_norm + xlogy(shape - 1.0, t) - rate * t;
        for (int j = 1; j <= kLocalOrder; ++j) d[j] = (shape - 1.0) * dlog(j, t);
        d[1] -= rate;
        return d;
      };
      spec.derivatives = std::move(p);
      break;
    }
  }
  return spec;
}

PosteriorOracle exact_posterior(const BuiltinModel& model) {
  PosteriorOracle oracle;
  oracle.model = instantiate(model);
  oracle.closed_form = true;
  oracle.quad_tolerance = std::numeric_limits<double>::epsilon();
  oracle.achieved_error = 0.0;
  const int n = model.n;
  switch (model.family) {
    case ModelFamily::beta_binomial: {
      const double alpha = model.hyper("a") + model.statistic;
      const double beta = model.hyper("b") + (n - model.statistic);
      oracle.central = beta_central_moments(alpha, beta);
      oracle.mean = oracle.central.about;
      oracle.cumulants = moments_to_cumulants(oracle.central);
      attach_distribution(oracle, boost::math::beta_distribution<double>(alpha, beta), 0.0, 1.0);
      break;
    }
    case ModelFamily::normal_normal: {
      const double tau2 = model.hyper("tau2");
      const double sigma2 = model.hyper("sigma2");
      const double prior_prec = std::isinf(tau2) ? 0.0 : 1.0 / tau2;
      const double prec = prior_prec + n / sigma2;
      const double mean = (prior_prec * model.hyper("mu0") + n * model.statistic / sigma2) / prec;
      const double var = 1.0 / prec;
      oracle.mean = mean;
      oracle.cumulants.values.assign(kMaxMomentOrder, 0.0);
      oracle.cumulants.values[0] = mean;
      oracle.cumulants.values[1] = var;
      oracle.central = cumulants_to_moments(oracle.cumulants, mean);
      attach_distribution(oracle, boost::math::normal_distribution<double>(mean, std::sqrt(var)),
                          -kInf, kInf);
      break;
    }
    case ModelFamily::gamma_exponential: {
      const double alpha = model.hyper("shape") + n;
      const double rate = model.hyper("rate") + model.statistic;
      oracle.cumulants.values.resize(kMaxMomentOrder);
      double fact = 1.0;  // (j-1)!
      for (int j = 1; j <= kMaxMomentOrder; ++j) {
        if (j > 1) fact *= (j - 1);
        oracle.cumulants.values[static_cast<std::size_t>(j) - 1] = alpha * fact / std::pow(rate, j);
      }
      oracle.mean = alpha / rate;
      oracle.central = cumulants_to_moments(oracle.cumulants, oracle.mean);
      attach_distribution(oracle, boost::math::gamma_distribution<double>(alpha, 1.0 / rate), 0.0,
                          kInf);
      break;
    }
  }
  oracle.sd = std::sqrt(oracle.cumulants(2));
  oracle.log_norm_const =
      log_posterior_unnorm(oracle.model, oracle.mean) - std::log(oracle.pdf(oracle.mean));
  return oracle;
}

}  // namespace edgepost
