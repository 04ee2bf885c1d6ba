#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edgepost/cli/run.hpp"
#include "edgepost/errors.hpp"

namespace edgepost::cli {

namespace {

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<int> to_int(const std::string& s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError({"grid must look like lo:hi:points, got '" + text + "'"});
  const auto lo = to_double(parts[0]);
  const auto hi = to_double(parts[1]);
  const auto pts = to_int(parts[2]);
  if (!lo || !hi || !pts) throw ValidationError({"grid must look like lo:hi:points, got '" + text + "'"});
  return {*lo, *hi, *pts};
}

std::vector<int> parse_sweep(const std::string& text) {
  std::vector<int> out;
  for (const auto& p : split(text, ',')) {
    const auto v = to_int(p);
    if (!v) throw ValidationError({"sweep must be a comma-separated list of integers"});
    out.push_back(*v);
  }
  return out;
}

void read_sweep_file(const std::string& path, RunConfig& config) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read sweep file: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
    config.sweep = j.at("sweep").get<std::vector<int>>();
    if (j.contains("ratio")) config.ratio = j.at("ratio").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError({std::string("bad sweep file: ") + e.what()});
  }
}

struct RawFlags {
  std::string model = "beta-binomial";
  std::optional<double> a, b, mu0, tau2, sigma2, xbar, shape, rate, sum;
  std::optional<int> n, x;
  int order = 3;
  std::string centering = "posterior-mean";
  std::string grid;
  bool theta_grid = false;
  bool standardized = false;
  std::string sweep;
  std::string sweep_file;
  std::optional<double> ratio;
  std::string format;
  std::string output;
  double quad_tol = 1e-12;
  std::string cumulants = "exact";
  std::string oracle = "closed-form";
};

BuiltinModel build_model(const RawFlags& f, bool sweeping, const std::vector<int>& sweep,
                         std::vector<std::string>& problems) {
  const auto family = parse_family(f.model);
  if (!family) {
    problems.push_back("unknown model '" + f.model +
                       "' (expected beta-binomial, normal-normal or gamma-exponential)");
    return {};
  }
  const auto need = [&](const auto& v, const char* flag) {
    if (!v) problems.push_back(std::string("--") + flag + " is required for " + f.model);
    return v.value_or(0);
  };
  int n = 0;
  if (sweeping) {
    n = sweep.empty() ? 1 : sweep.front();
  } else {
    n = need(f.n, "n");
  }
  switch (*family) {
    case ModelFamily::beta_binomial: {
      const double a = need(f.a, "a");
      const double b = need(f.b, "b");
      const int x = sweeping ? 0 : need(f.x, "x");
      return beta_binomial(a, b, n, x);
    }
    case ModelFamily::normal_normal: {
      const double tau2 = f.tau2.value_or(std::numeric_limits<double>::infinity());
      const double xbar = sweeping ? 0.0 : need(f.xbar, "xbar");
      return normal_normal(need(f.mu0, "mu0"), tau2, need(f.sigma2, "sigma2"), n, xbar);
    }
    case ModelFamily::gamma_exponential: {
      const double sum = sweeping ? 1.0 : need(f.sum, "sum");
      return gamma_exponential(need(f.shape, "shape"), need(f.rate, "rate"), n, sum);
    }
  }
  return {};
}

// Lets values such as "-3:3:241" follow their flag without being taken for
// an option.
std::vector<std::string> join_values(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--grid" || a == "--sweep") && i + 1 < argc) {
      args.push_back(a + "=" + argv[i + 1]);
      ++i;
    } else {
      args.push_back(a);
    }
  }
  return args;
}

}  // namespace

RunConfig parse_arguments(int argc, const char* const* argv) {
  CLI::App app{"Edgeworth expansions of one-parameter posteriors", "edgepost"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.allow_windows_style_options(false);

  RawFlags f;
  app.add_option("--model", f.model, "beta-binomial | normal-normal | gamma-exponential");
  app.add_option("--a", f.a, "Beta prior a");
  app.add_option("--b", f.b, "Beta prior b");
  app.add_option("--n", f.n, "number of observations");
  app.add_option("--x", f.x, "number of successes");
  app.add_option("--mu0", f.mu0, "normal prior mean");
  app.add_option("--tau2", f.tau2, "normal prior variance (omit for a flat prior)");
  app.add_option("--sigma2", f.sigma2, "known observation variance");
  app.add_option("--xbar", f.xbar, "sample mean");
  app.add_option("--shape", f.shape, "Gamma prior shape");
  app.add_option("--rate", f.rate, "Gamma prior rate");
  app.add_option("--sum", f.sum, "sum of the exponential observations");
  app.add_option("--order", f.order, "expansion order k in [2, 5]");
  app.add_option("--centering", f.centering, "posterior-mean | mle | recentered");
  app.add_option("--grid", f.grid, "lo:hi:points in standardized units");
  app.add_flag("--theta-grid", f.theta_grid, "interpret --grid on the parameter scale");
  app.add_flag("--standardized", f.standardized, "emit densities on the standardized scale");
  app.add_option("--sweep", f.sweep, "comma-separated increasing n values");
  app.add_option("--sweep-file", f.sweep_file, "JSON file with \"sweep\" and optional \"ratio\"");
  app.add_option("--ratio", f.ratio, "data scaling for sweeps (successes / n, mean, or sum / n)");
  app.add_option("--format", f.format, "csv | json (default from --output extension)");
  app.add_option("--output", f.output, "data file path");
  app.add_option("--quad-tol", f.quad_tol, "quadrature tolerance in [1e-13, 1e-6]");
  app.add_option("--cumulants", f.cumulants, "exact | laplace");
  app.add_option("--oracle", f.oracle, "closed-form | quadrature");

  const std::vector<std::pair<const char*, Command>> commands = {
      {"cumulants", Command::cumulants},
      {"density", Command::density},
      {"cdf", Command::cdf},
      {"compare", Command::compare},
      {"convergence", Command::convergence}};
  for (const auto& [name, cmd] : commands) app.add_subcommand(name, "");

  std::vector<std::string> args = join_values(argc, argv);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw ValidationError({e.what()});
  }

  RunConfig config;
  for (const auto& [name, cmd] : commands) {
    if (app.got_subcommand(name)) config.command = cmd;
  }
  std::vector<std::string> problems;
  const auto expect = [&problems](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };

  config.order_k = f.order;
  if (f.centering == "posterior-mean") {
    config.centering = CenteringChoice::posterior_mean;
  } else if (f.centering == "mle") {
    config.centering = CenteringChoice::mle;
  } else if (f.centering == "recentered") {
    config.centering = CenteringChoice::recentered;
  } else {
    problems.push_back("unknown centering '" + f.centering + "'");
  }
  if (!f.grid.empty()) {
    try {
      config.grid = parse_grid(f.grid);
    } catch (const ValidationError& e) {
      problems.insert(problems.end(), e.violations().begin(), e.violations().end());
    }
  }
  config.theta_grid = f.theta_grid;
  config.standardized_output = f.standardized;
  if (!f.sweep_file.empty()) read_sweep_file(f.sweep_file, config);
  if (!f.sweep.empty()) {
    try {
      config.sweep = parse_sweep(f.sweep);
    } catch (const ValidationError& e) {
      problems.insert(problems.end(), e.violations().begin(), e.violations().end());
    }
  }
  if (f.ratio) config.ratio = *f.ratio;
  const bool sweeping = config.command == Command::convergence;
  expect(!sweeping || !config.sweep.empty(), "convergence needs --sweep or --sweep-file");
  config.model = build_model(f, sweeping, config.sweep, problems);

  config.output_path = f.output;
  std::string format = f.format;
  if (format.empty()) {
    const bool json_ext = f.output.size() >= 5 && f.output.substr(f.output.size() - 5) == ".json";
    format = json_ext ? "json" : "csv";
  }
  if (format == "csv") {
    config.format = OutputFormat::csv;
  } else if (format == "json") {
    config.format = OutputFormat::json;
  } else {
    problems.push_back("unknown format '" + format + "'");
  }
  config.quad_tolerance = f.quad_tol;
  if (f.cumulants == "exact") {
    config.cumulant_source = CumulantSource::exact;
  } else if (f.cumulants == "laplace") {
    config.cumulant_source = CumulantSource::laplace;
  } else {
    problems.push_back("unknown cumulant source '" + f.cumulants + "'");
  }
  if (f.oracle == "closed-form") {
    config.oracle_source = OracleSource::closed_form;
  } else if (f.oracle == "quadrature") {
    config.oracle_source = OracleSource::quadrature;
  } else {
    problems.push_back("unknown oracle '" + f.oracle + "'");
  }
  if (!problems.empty()) throw ValidationError(problems);
  return config;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = parse_arguments(argc, argv);
    const ComparisonReport report = run(config);
    if (!config.output_path.empty()) emit_plot_data(report, config.format, config.output_path);
    print_summary(report, out);
    return 0;
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.category()) {
      case ErrorCategory::validation:
        return 2;
      case ErrorCategory::oracle:
        return 3;
      case ErrorCategory::expansion:
        return 4;
      case ErrorCategory::io:
        return 5;
    }
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace edgepost::cli
