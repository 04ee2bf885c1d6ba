#include "edgepost/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "edgepost/errors.hpp"
#include "peak.hpp"

namespace edgepost {

double Support::reach(double theta) const noexcept {
  return std::min(theta - lo, hi - theta);
}

double ModelSpec::log_likelihood(double theta) const {
  // Runs of equal observations become count * term, and the runs are summed
  // with Neumaier compensation. A plain running sum over n terms leaves
  // O(n eps |sum|) jitter that adaptive quadrature cannot get below.
  double acc = 0.0;
  double comp = 0.0;
  for (std::size_t i = 0; i < data.size();) {
    std::size_t j = i + 1;
    while (j < data.size() && data[j] == data[i]) ++j;
    const double term = static_cast<double>(j - i) * log_lik_term(theta, data[i]);
    const double t = acc + term;
    comp += std::abs(acc) >= std::abs(term) ? (acc - t) + term : (term - t) + acc;
    acc = t;
    i = j;
  }
  return acc + comp;
}

double log_posterior_unnorm(const ModelSpec& model, double theta) {
  if (!model.support.contains(theta)) return -std::numeric_limits<double>::infinity();
  double lp = model.log_prior ? model.log_prior(theta) : 0.0;
  lp += model.log_likelihood(theta);
  return std::isnan(lp) ? -std::numeric_limits<double>::infinity() : lp;
}

namespace {

void check_interior(const ModelSpec& model, double theta) {
  if (!model.support.contains(theta)) {
    throw DerivativeError("derivatives requested at non-interior point " + std::to_string(theta),
                          0, theta);
  }
}

void check_finite(const DerivativeTable& d, double theta, const char* what) {
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (!std::isfinite(d[j])) {
      throw DerivativeError(std::string(what) + " derivative of order " + std::to_string(j) +
                                " is not finite at " + std::to_string(theta),
                            static_cast<int>(j), theta);
    }
  }
}

// Characteristic length for finite-difference steps.
double fd_scale(const ModelSpec& model, double theta) {
  double scale = std::max(std::abs(theta), 1.0);
  const double reach = model.support.reach(theta);
  if (std::isfinite(reach)) scale = std::min(scale, reach);
  return scale;
}

}  // namespace

DerivativeTable average_loglik_derivatives(const ModelSpec& model, double theta) {
  check_interior(model, theta);
  DerivativeTable d{};
  if (model.n_obs() == 0) return d;
  if (model.derivatives && model.derivatives->average_loglik) {
    d = model.derivatives->average_loglik(theta);
  } else {
    const double n = model.n_obs();
    d = finite_difference_table([&](double t) { return model.log_likelihood(t) / n; }, theta,
                                fd_scale(model, theta), model.support.reach(theta));
  }
  check_finite(d, theta, "average loglikelihood");
  return d;
}

DerivativeTable log_prior_derivatives(const ModelSpec& model, double theta) {
  check_interior(model, theta);
  DerivativeTable d{};
  if (!model.log_prior) return d;
  if (model.derivatives && model.derivatives->log_prior) {
    d = model.derivatives->log_prior(theta);
  } else {
    d = finite_difference_table(model.log_prior, theta, fd_scale(model, theta),
                                model.support.reach(theta));
  }
  check_finite(d, theta, "log prior");
  return d;
}

double PosteriorOracle::invariant_cumulant(int j) const {
  return cumulants(j) / std::pow(cumulants(2), 0.5 * j);
}

namespace {

// Integrates weight(theta) * exp(log_posterior - log_ref) over sub-ranges of
// the support. Breakpoints are placed on a scale-aware ladder around the
// peak; pieces touching a finite endpoint use tanh-sinh (tolerates integrable
// endpoint singularities), infinite tails use exp-sinh, the rest adaptive
// Gauss-Kronrod.
class PosteriorIntegrator {
 public:
  PosteriorIntegrator(ModelSpec model, double center, double scale, double log_ref, double tol)
      : model_(std::move(model)), center_(center), scale_(scale), log_ref_(log_ref), tol_(tol) {
    for (double k : {-24.0, -16.0, -8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 24.0}) {
      const double b = center_ + k * scale_;
      if (model_.support.contains(b)) breaks_.push_back(b);
    }
    breaks_.erase(std::unique(breaks_.begin(), breaks_.end()), breaks_.end());
  }

  struct Result {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
  };

  double weight(double theta) const {
    const double lp = log_posterior_unnorm(model_, theta);
    if (!std::isfinite(lp)) return 0.0;
    return std::exp(lp - log_ref_);
  }

  template <class G>
  Result integrate(const G& g, double a, double b) const {
    Result total;
    if (!(b > a)) return total;
    std::vector<double> nodes{a};
    for (double x : breaks_) {
      if (x > a && x < b) nodes.push_back(x);
    }
    nodes.push_back(b);
    const auto f = [&](double t) {
      const double w = weight(t);
      if (w == 0.0) return 0.0;
      const double v = g(t) * w;
      return std::isfinite(v) ? v : 0.0;
    };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const double lo = nodes[i];
      const double hi = nodes[i + 1];
      double err = 0.0;
      double l1 = 0.0;
      double q = 0.0;
      const bool lo_edge = (lo == model_.support.lo);
      const bool hi_edge = (hi == model_.support.hi);
      if (std::isinf(lo) || std::isinf(hi)) {
        boost::math::quadrature::exp_sinh<double> es;
        q = es.integrate(f, lo, hi, tol_, &err, &l1);
      } else if (lo_edge || hi_edge) {
        boost::math::quadrature::tanh_sinh<double> ts;
        q = ts.integrate(f, lo, hi, tol_, &err, &l1);
      } else {
        q = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, tol_,
                                                                          &err, &l1);
      }
      total.value += q;
      total.error += err;
      total.l1 += l1;
    }
    return total;
  }

  const ModelSpec& model() const { return model_; }
  double log_ref() const { return log_ref_; }

 private:
  ModelSpec model_;
  double center_;
  double scale_;
  double log_ref_;
  double tol_;
  std::vector<double> breaks_;
};

}  // namespace

PosteriorOracle build_oracle(const ModelSpec& model, double quad_tolerance) {
  if (!(quad_tolerance >= 1e-13 && quad_tolerance <= 1e-6)) {
    throw DomainError("quadrature tolerance must lie in [1e-13, 1e-6]");
  }
  const auto log_post = [&](double t) { return log_posterior_unnorm(model, t); };
  const detail::Peak peak = detail::locate_peak(log_post, model.support);
  double center = peak.argmax;
  double scale = peak.grid_scale;
  if (!peak.at_boundary) {
    // Refine the mode and use the Laplace scale when the curvature allows it.
    const auto grad = [&](double t) {
      return ridders_derivative(log_post, t, 1, 0.1 * std::min(peak.grid_scale, model.support.reach(t)))
          .value;
    };
    const auto curv = [&](double t) {
      return ridders_derivative(log_post, t, 2, 0.1 * std::min(peak.grid_scale, model.support.reach(t)))
          .value;
    };
    center = detail::refine_maximum(grad, curv, peak.bracket_lo, peak.bracket_hi, center, 0.0);
    const double c2 = curv(center);
    if (c2 < 0.0 && std::isfinite(c2)) scale = 1.0 / std::sqrt(-c2);
  }
  double log_ref = log_post(center);
  if (!std::isfinite(log_ref)) log_ref = peak.max_value;
  if (peak.at_boundary) {
    // The grid half-width is meaningless next to an endpoint singularity;
    // size the ladder by how far the bulk reaches from the endpoint instead.
    const double lo_gap = center - model.support.lo;
    const double hi_gap = model.support.hi - center;
    const bool near_lo = lo_gap < hi_gap;
    const double edge = near_lo ? model.support.lo : model.support.hi;
    if (std::isfinite(edge)) {
      const double dir = near_lo ? 1.0 : -1.0;
      double d = std::max(std::abs(center - edge), 1e-14 * (1.0 + std::abs(edge)));
      for (int it = 0; it < 200; ++it) {
        const double t = edge + dir * 2.0 * d;
        if (!model.support.contains(t) || log_post(t) < log_ref - 30.0) break;
        d *= 2.0;
      }
      center = edge;
      scale = d / 24.0;
    }
  }

  auto integrator =
      std::make_shared<PosteriorIntegrator>(model, center, scale, log_ref, quad_tolerance);
  const double lo = model.support.lo;
  const double hi = model.support.hi;

  double worst_error = 0.0;
  const auto check = [&](const PosteriorIntegrator::Result& r, const char* what) {
    const double rel = r.l1 > 0.0 ? r.error / r.l1 : 0.0;
    worst_error = std::max(worst_error, rel);
    if (!std::isfinite(r.value) || rel > 10.0 * quad_tolerance) {
      throw OracleFailure(std::string("posterior quadrature for ") + what +
                              " did not reach tolerance",
                          rel);
    }
  };

  const auto mass = integrator->integrate([](double) { return 1.0; }, lo, hi);
  check(mass, "normalizing constant");
  if (!(mass.value > 0.0)) throw OracleFailure("posterior has zero mass", 0.0);
  const double z = mass.value;

  const auto first = integrator->integrate([&](double t) { return t - center; }, lo, hi);
  check(first, "mean");
  const double mean = center + first.value / z;

  PosteriorOracle oracle;
  oracle.model = model;
  oracle.log_norm_const = log_ref + std::log(z);
  oracle.mean = mean;
  oracle.central.about = mean;
  oracle.central.values.assign(kMaxMomentOrder, 0.0);
  for (int j = 2; j <= kMaxMomentOrder; ++j) {
    const auto r = integrator->integrate([&](double t) { return std::pow(t - mean, j); }, lo, hi);
    check(r, "central moment");
    oracle.central.values[static_cast<std::size_t>(j) - 1] = r.value / z;
  }
  oracle.cumulants = moments_to_cumulants(oracle.central);
  oracle.sd = std::sqrt(oracle.cumulants(2));
  oracle.quad_tolerance = quad_tolerance;
  oracle.achieved_error = worst_error;
  oracle.closed_form = false;

  const double log_z = std::log(z);
  oracle.pdf = [integrator, log_z](double t) {
    const double w = integrator->weight(t);
    return w == 0.0 ? 0.0 : std::exp(std::log(w) - log_z);
  };
  oracle.cdf = [integrator, z, lo](double t) {
    if (!(t > lo)) return 0.0;
    const double hi_lim = std::min(t, integrator->model().support.hi);
    const auto r = integrator->integrate([](double) { return 1.0; }, lo, hi_lim);
    return std::clamp(r.value / z, 0.0, 1.0);
  };
  return oracle;
}

double find_mle(const ModelSpec& model) {
  const auto loglik = [&](double t) {
    if (!model.support.contains(t)) return -std::numeric_limits<double>::infinity();
    const double v = model.log_likelihood(t);
    return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
  };
  const detail::Peak peak = detail::locate_peak(loglik, model.support);
  if (peak.at_boundary) {
    throw BoundaryMaximumError("loglikelihood has no interior maximum (sup at support boundary)");
  }
  const double n = std::max(model.n_obs(), 1);
  const auto grad = [&](double t) { return n * average_loglik_derivatives(model, t)[1]; };
  const auto curv = [&](double t) { return n * average_loglik_derivatives(model, t)[2]; };
  return detail::refine_maximum(grad, curv, peak.bracket_lo, peak.bracket_hi, peak.argmax,
                                1e-10 * n);
}

double observed_info_sd(const ModelSpec& model, double mle) {
  const double second = model.n_obs() * average_loglik_derivatives(model, mle)[2];
  if (!(second < 0.0)) {
    throw CurvatureError("loglikelihood curvature at the MLE is not negative (" +
                         std::to_string(second) + ")");
  }
  return 1.0 / std::sqrt(-second);
}

ModelSpec affine_reparameterize(const ModelSpec& model, double scale, double shift) {
  if (scale == 0.0 || !std::isfinite(scale) || !std::isfinite(shift)) {
    throw DomainError("affine reparameterization needs a finite nonzero scale");
  }
  ModelSpec out;
  const auto back = [scale, shift](double phi) { return (phi - shift) / scale; };
  const double log_jac = std::log(std::abs(scale));
  if (model.log_prior) {
    out.log_prior = [prior = model.log_prior, back, log_jac](double phi) {
      return prior(back(phi)) - log_jac;
    };
  } else {
    out.log_prior = [log_jac](double) { return -log_jac; };
  }
  out.log_lik_term = [term = model.log_lik_term, back](double phi, double x) {
    return term(back(phi), x);
  };
  out.data = model.data;
  const double a = scale * model.support.lo + shift;
  const double b = scale * model.support.hi + shift;
  out.support = {std::min(a, b), std::max(a, b)};
  if (model.derivatives) {
    const auto chain = [scale](DerivativeTable d) {
      double f = 1.0;
      for (std::size_t j = 1; j < d.size(); ++j) {
        f /= scale;
        d[j] *= f;
      }
      return d;
    };
    DerivativeProvider p;
    if (model.derivatives->average_loglik) {
      p.average_loglik = [src = model.derivatives->average_loglik, back, chain](double phi) {
        return chain(src(back(phi)));
      };
    }
    if (model.derivatives->log_prior) {
      p.log_prior = [src = model.derivatives->log_prior, back, chain, log_jac](double phi) {
        auto d = chain(src(back(phi)));
        d[0] -= log_jac;
        return d;
      };
    } else if (!model.log_prior) {
      p.log_prior = [log_jac](double) {
        DerivativeTable d{};
        d[0] = -log_jac;
        return d;
      };
    }
    out.derivatives = std::move(p);
  }
  return out;
}

}  // namespace edgepost
