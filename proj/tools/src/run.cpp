#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "edgepost/cli/run.hpp"
#include "edgepost/edgeworth.hpp"
#include "edgepost/errors.hpp"
#include "edgepost/laplace.hpp"

namespace edgepost::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

PosteriorOracle make_oracle(const RunConfig& config, const BuiltinModel& model) {
  if (config.oracle_source == OracleSource::quadrature) {
    return build_oracle(instantiate(model), config.quad_tolerance);
  }
  return exact_posterior(model);
}

InvariantCumulants exact_kappa(const PosteriorOracle& oracle) {
  return {oracle.invariant_cumulant(3), oracle.invariant_cumulant(4), oracle.invariant_cumulant(5)};
}

// The full set of series for one model.
struct SeriesSet {
  EdgeworthSeries density;
  EdgeworthSeries cdf;
  EdgeworthSeries normal_density;
  EdgeworthSeries normal_cdf;
  std::optional<EdgeworthSeries> mle_density;
  std::optional<EdgeworthSeries> mle_cdf;
  std::optional<EdgeworthSeries> recentered_density;
  std::optional<EdgeworthSeries> recentered_cdf;
  std::vector<std::string> notes;
};

SeriesSet build_all(const RunConfig& config, const ModelSpec& spec, const PosteriorOracle& oracle) {
  SeriesSet out;
  InvariantCumulants kappa = exact_kappa(oracle);
  Centering centering{oracle.mean, oracle.sd, CenteringLabel::posterior_mean};
  if (config.cumulant_source == CumulantSource::laplace) {
    const LaplaceCumulants lc = laplace_cumulants(spec);
    kappa = {lc.kappa3, lc.kappa4, lc.kappa5};
    centering.center = lc.beta(1);
    centering.scale = std::sqrt(lc.beta(2));
  }
  out.density = build_series(kappa, config.order_k, SeriesKind::density, centering);
  out.cdf = build_series(kappa, config.order_k, SeriesKind::cdf, centering);
  out.normal_density = build_series({}, config.order_k, SeriesKind::density, centering);
  out.normal_cdf = build_series({}, config.order_k, SeriesKind::cdf, centering);

  const bool needed = config.centering != CenteringChoice::posterior_mean;
  try {
    out.mle_density = build_mle_centered(spec, oracle, config.order_k, SeriesKind::density);
    out.mle_cdf = build_mle_centered(spec, oracle, config.order_k, SeriesKind::cdf);
  } catch (const Error& e) {
    if (needed) throw;
    out.notes.push_back(std::string("mle_centered unavailable: ") + e.what());
    return out;
  }
  try {
    out.recentered_density = recenter(*out.mle_density, config.order_k);
    out.recentered_cdf = integrate_series(*out.recentered_density);
  } catch (const Error& e) {
    if (config.centering == CenteringChoice::recentered) throw;
    out.notes.push_back(std::string("recentered unavailable: ") + e.what());
  }
  return out;
}

std::vector<double> eval_on(const std::optional<EdgeworthSeries>& s, const std::vector<double>& theta,
                            bool is_density) {
  std::vector<double> out(theta.size(), kNaN);
  if (!s) return out;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    out[i] = is_density ? density_at_theta(*s, theta[i]) : cdf_at_theta(*s, theta[i]);
  }
  return out;
}

double exact_pdf(const PosteriorOracle& oracle, double theta) {
  if (!oracle.model.support.contains(theta)) return 0.0;
  return oracle.pdf(theta);
}

double exact_cdf(const PosteriorOracle& oracle, double theta) {
  if (theta <= oracle.model.support.lo) return 0.0;
  if (theta >= oracle.model.support.hi) return 1.0;
  return oracle.cdf(theta);
}

void fill_grid_report(ComparisonReport& report) {
  const RunConfig& config = report.config;
  const PosteriorOracle oracle = make_oracle(config, config.model);
  const ModelSpec spec = instantiate(config.model);
  SeriesSet set = build_all(config, spec, oracle);
  report.notes = set.notes;
  report.mean = oracle.mean;
  report.sd = oracle.sd;

  const std::vector<double> grid = linspace(config.grid.lo, config.grid.hi, config.grid.points);
  report.theta.resize(grid.size());
  report.vartheta.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (config.theta_grid) {
      report.theta[i] = grid[i];
      report.vartheta[i] = (grid[i] - oracle.mean) / oracle.sd;
    } else {
      report.vartheta[i] = grid[i];
      report.theta[i] = oracle.mean + oracle.sd * grid[i];
    }
  }
  const auto& th = report.theta;

  std::vector<double> ex_pdf(th.size());
  std::vector<double> ex_cdf(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    ex_pdf[i] = exact_pdf(oracle, th[i]);
    ex_cdf[i] = exact_cdf(oracle, th[i]);
  }
  report.density["exact"] = ex_pdf;
  report.cdf["exact"] = ex_cdf;
  report.density["normal"] = eval_on(set.normal_density, th, true);
  report.cdf["normal"] = eval_on(set.normal_cdf, th, false);
  report.density["edgeworth"] = eval_on(set.density, th, true);
  report.cdf["edgeworth"] = eval_on(set.cdf, th, false);
  report.density["mle_centered"] = eval_on(set.mle_density, th, true);
  report.cdf["mle_centered"] = eval_on(set.mle_cdf, th, false);
  report.density["recentered"] = eval_on(set.recentered_density, th, true);
  report.cdf["recentered"] = eval_on(set.recentered_cdf, th, false);

  if (config.standardized_output) {
    for (auto& [name, column] : report.density) {
      for (double& v : column) v *= oracle.sd;
    }
  }
  const std::vector<double>& x = config.standardized_output ? report.vartheta : report.theta;
  for (const auto& name : kMethods) {
    if (name == "exact") continue;
    MethodErrors e;
    e.density_sup = sup_error(report.density[name], report.density["exact"]);
    e.density_l1 = l1_error(x, report.density[name], report.density["exact"]);
    e.cdf_sup = sup_error(report.cdf[name], report.cdf["exact"]);
    if (std::isnan(report.density[name].front())) e = {kNaN, kNaN, kNaN};
    report.errors[name] = e;
  }
}

void fill_cumulant_report(ComparisonReport& report) {
  const RunConfig& config = report.config;
  const PosteriorOracle oracle = make_oracle(config, config.model);
  report.mean = oracle.mean;
  report.sd = oracle.sd;
  report.cumulant_rows.push_back({"exact", oracle.mean, oracle.sd, oracle.invariant_cumulant(3),
                                  oracle.invariant_cumulant(4), oracle.invariant_cumulant(5)});
  const LaplaceCumulants lc = laplace_cumulants(instantiate(config.model));
  report.cumulant_rows.push_back(
      {"laplace", lc.beta(1), std::sqrt(lc.beta(2)), lc.kappa3, lc.kappa4, lc.kappa5});
}

SweepRow sweep_entry(const RunConfig& config, int n) {
  const BuiltinModel model = with_sample_size(config.model, n, config.ratio);
  const PosteriorOracle oracle = make_oracle(config, model);
  const ModelSpec spec = instantiate(model);
  RunConfig exact_config = config;
  exact_config.cumulant_source = CumulantSource::exact;
  const SeriesSet set = build_all(exact_config, spec, oracle);

  SweepRow row;
  row.n = n;
  const InvariantCumulants kappa = exact_kappa(oracle);
  row.kappa3 = kappa.k3;
  row.kappa4 = kappa.k4;
  row.kappa5 = kappa.k5;

  // Errors on the standardized scale.
  const std::vector<double> grid = linspace(config.grid.lo, config.grid.hi, config.grid.points);
  std::vector<double> ex_pdf(grid.size());
  std::vector<double> ex_cdf(grid.size());
  std::vector<double> ew_pdf(grid.size());
  std::vector<double> ew_cdf(grid.size());
  std::vector<double> nm_pdf(grid.size());
  std::vector<double> nm_cdf(grid.size());
  std::vector<double> ml_pdf(grid.size(), kNaN);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double th = oracle.mean + oracle.sd * grid[i];
    ex_pdf[i] = oracle.sd * exact_pdf(oracle, th);
    ex_cdf[i] = exact_cdf(oracle, th);
    ew_pdf[i] = oracle.sd * density_at_theta(set.density, th);
    ew_cdf[i] = cdf_at_theta(set.cdf, th);
    nm_pdf[i] = oracle.sd * density_at_theta(set.normal_density, th);
    nm_cdf[i] = cdf_at_theta(set.normal_cdf, th);
    if (set.mle_density) ml_pdf[i] = oracle.sd * density_at_theta(*set.mle_density, th);
  }
  row.edgeworth_density_sup = sup_error(ew_pdf, ex_pdf);
  row.edgeworth_cdf_sup = sup_error(ew_cdf, ex_cdf);
  row.normal_density_sup = sup_error(nm_pdf, ex_pdf);
  row.normal_cdf_sup = sup_error(nm_cdf, ex_cdf);
  row.mle_density_sup = set.mle_density ? sup_error(ml_pdf, ex_pdf) : kNaN;

  row.laplace_kappa3 = row.laplace_kappa4 = row.laplace_kappa5 = kNaN;
  row.beta2_rel_error = kNaN;
  try {
    const LaplaceCumulants lc = laplace_cumulants(spec);
    row.laplace_kappa3 = lc.kappa3;
    row.laplace_kappa4 = lc.kappa4;
    row.laplace_kappa5 = lc.kappa5;
    const double b2 = oracle.cumulants(2);
    row.beta2_rel_error = std::abs(lc.beta(2) - b2) / b2;
  } catch (const Error&) {
  }

  row.recenter_distance = set.recentered_density
                              ? coefficient_distance(*set.recentered_density, set.density)
                              : kNaN;
  row.mle_coefficients.assign(6, kNaN);
  if (set.mle_density) {
    const auto coefs = coefficients_by_degree(*set.mle_density);
    for (int d = 1; d <= 6; ++d) {
      const auto it = coefs.find(d);
      row.mle_coefficients[static_cast<std::size_t>(d) - 1] = it == coefs.end() ? 0.0 : it->second;
    }
  }
  return row;
}

void add_fit(ComparisonReport& report, const std::string& name, const std::vector<double>& y) {
  std::vector<double> x;
  std::vector<double> ay;
  for (std::size_t i = 0; i < y.size(); ++i) {
    x.push_back(report.sweep_rows[i].n);
    ay.push_back(std::abs(y[i]));
  }
  for (double v : ay) {
    if (!(v > 0.0) || !std::isfinite(v)) return;
  }
  if (x.size() < 3) return;
  report.fits.emplace_back(name, fit_loglog(x, ay, true));
}

void fill_convergence_report(ComparisonReport& report) {
  const RunConfig& config = report.config;
  std::vector<std::future<SweepRow>> jobs;
  jobs.reserve(config.sweep.size());
  for (int n : config.sweep) {
    jobs.push_back(std::async(std::launch::async, [&config, n] { return sweep_entry(config, n); }));
  }
  for (auto& job : jobs) report.sweep_rows.push_back(job.get());

  const auto column = [&](auto member) {
    std::vector<double> v;
    for (const auto& r : report.sweep_rows) v.push_back(member(r));
    return v;
  };
  add_fit(report, "edgeworth_density_sup", column([](const SweepRow& r) { return r.edgeworth_density_sup; }));
  add_fit(report, "edgeworth_cdf_sup", column([](const SweepRow& r) { return r.edgeworth_cdf_sup; }));
  add_fit(report, "normal_density_sup", column([](const SweepRow& r) { return r.normal_density_sup; }));
  add_fit(report, "normal_cdf_sup", column([](const SweepRow& r) { return r.normal_cdf_sup; }));
  add_fit(report, "mle_density_sup", column([](const SweepRow& r) { return r.mle_density_sup; }));
  add_fit(report, "kappa3", column([](const SweepRow& r) { return r.kappa3; }));
  add_fit(report, "kappa4", column([](const SweepRow& r) { return r.kappa4; }));
  add_fit(report, "kappa5", column([](const SweepRow& r) { return r.kappa5; }));
  add_fit(report, "laplace_kappa3", column([](const SweepRow& r) { return r.laplace_kappa3; }));
  add_fit(report, "laplace_kappa4", column([](const SweepRow& r) { return r.laplace_kappa4; }));
  add_fit(report, "laplace_kappa5", column([](const SweepRow& r) { return r.laplace_kappa5; }));
  add_fit(report, "beta2_rel_error", column([](const SweepRow& r) { return r.beta2_rel_error; }));
  add_fit(report, "recenter_distance", column([](const SweepRow& r) { return r.recenter_distance; }));
  for (int d = 1; d <= 6; ++d) {
    add_fit(report, "mle_c" + std::to_string(d), column([d](const SweepRow& r) {
              return r.mle_coefficients[static_cast<std::size_t>(d) - 1];
            }));
  }
}

}  // namespace

void validate(const RunConfig& config) {
  std::vector<std::string> problems;
  if (config.order_k < 2 || config.order_k > 5) {
    problems.push_back("order must lie in [2, 5]");
  }
  if (!(config.grid.lo < config.grid.hi) || config.grid.points < 2) {
    problems.push_back("grid needs lo < hi and at least 2 points");
  }
  if (!(config.quad_tolerance >= 1e-13 && config.quad_tolerance <= 1e-6)) {
    problems.push_back("quadrature tolerance must lie in [1e-13, 1e-6]");
  }
  if (config.command == Command::convergence) {
    if (config.sweep.size() < 3) problems.push_back("sweep needs at least three n values");
    for (std::size_t i = 0; i < config.sweep.size(); ++i) {
      if (config.sweep[i] < 1) problems.push_back("sweep n values must be positive");
      if (i > 0 && config.sweep[i] <= config.sweep[i - 1]) {
        problems.push_back("sweep n values must be strictly increasing");
      }
    }
    if (!(config.ratio >= 0.0) || !std::isfinite(config.ratio)) {
      problems.push_back("ratio must be finite and non-negative");
    }
  }
  try {
    edgepost::validate(config.model);
  } catch (const ValidationError& e) {
    problems.insert(problems.end(), e.violations().begin(), e.violations().end());
  }
  if (!problems.empty()) throw ValidationError(problems);
}

ComparisonReport run(const RunConfig& config) {
  validate(config);
  ComparisonReport report;
  report.config = config;
  switch (config.command) {
    case Command::cumulants:
      fill_cumulant_report(report);
      break;
    case Command::density:
    case Command::cdf:
    case Command::compare:
      fill_grid_report(report);
      break;
    case Command::convergence:
      fill_convergence_report(report);
      break;
  }
  return report;
}

}  // namespace edgepost::cli
