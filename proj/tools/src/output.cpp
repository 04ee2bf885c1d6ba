#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "edgepost/cli/run.hpp"
#include "edgepost/errors.hpp"

namespace edgepost::cli {

namespace {

using Json = nlohmann::ordered_json;

// Shortest round-trip representation; locale independent.
std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json json_array(const std::vector<double>& values) {
  Json a = Json::array();
  for (double v : values) a.push_back(json_number(v));
  return a;
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::cumulants:
      return "cumulants";
    case Command::density:
      return "density";
    case Command::cdf:
      return "cdf";
    case Command::compare:
      return "compare";
    case Command::convergence:
      return "convergence";
  }
  return "";
}

std::string_view centering_name(CenteringChoice c) {
  switch (c) {
    case CenteringChoice::posterior_mean:
      return "posterior-mean";
    case CenteringChoice::mle:
      return "mle";
    case CenteringChoice::recentered:
      return "recentered";
  }
  return "";
}

std::string_view selected_method(CenteringChoice c) {
  switch (c) {
    case CenteringChoice::posterior_mean:
      return "edgeworth";
    case CenteringChoice::mle:
      return "mle_centered";
    case CenteringChoice::recentered:
      return "recentered";
  }
  return "edgeworth";
}

const char* x_name(const ComparisonReport& r) {
  return r.config.standardized_output ? "vartheta" : "theta";
}

std::vector<std::string> sweep_header() {
  std::vector<std::string> h = {"n",
                                "edgeworth_density_sup",
                                "edgeworth_cdf_sup",
                                "normal_density_sup",
                                "normal_cdf_sup",
                                "mle_density_sup",
                                "kappa3",
                                "kappa4",
                                "kappa5",
                                "laplace_kappa3",
                                "laplace_kappa4",
                                "laplace_kappa5",
                                "beta2_rel_error",
                                "recenter_distance"};
  for (int d = 1; d <= 6; ++d) h.push_back("mle_c" + std::to_string(d));
  return h;
}

std::vector<double> sweep_values(const SweepRow& r) {
  std::vector<double> v = {static_cast<double>(r.n), r.edgeworth_density_sup, r.edgeworth_cdf_sup,
                           r.normal_density_sup,     r.normal_cdf_sup,        r.mle_density_sup,
                           r.kappa3,                 r.kappa4,                r.kappa5,
                           r.laplace_kappa3,         r.laplace_kappa4,        r.laplace_kappa5,
                           r.beta2_rel_error,        r.recenter_distance};
  v.insert(v.end(), r.mle_coefficients.begin(), r.mle_coefficients.end());
  return v;
}

Json model_json(const BuiltinModel& m) {
  Json j;
  j["family"] = std::string(to_string(m.family));
  Json h = Json::object();
  for (const auto& [k, v] : m.hyperparameters) h[k] = json_number(v);
  j["hyperparameters"] = h;
  j["n"] = m.n;
  j["statistic"] = m.statistic;
  return j;
}

}  // namespace

std::string to_csv(const ComparisonReport& report) {
  std::string out;
  const auto row = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  switch (report.config.command) {
    case Command::cumulants:
      row({"source", "mean", "sd", "kappa3", "kappa4", "kappa5"});
      for (const auto& r : report.cumulant_rows) {
        row({r.source, number(r.mean), number(r.sd), number(r.kappa3), number(r.kappa4),
             number(r.kappa5)});
      }
      break;
    case Command::convergence: {
      row(sweep_header());
      for (const auto& r : report.sweep_rows) {
        std::vector<std::string> cells;
        for (double v : sweep_values(r)) cells.push_back(number(v));
        cells[0] = std::to_string(r.n);
        row(cells);
      }
      break;
    }
    default: {
      const auto& columns = report.config.command == Command::cdf ? report.cdf : report.density;
      std::vector<std::string> header = {x_name(report)};
      header.insert(header.end(), kMethods.begin(), kMethods.end());
      row(header);
      const auto& x = report.config.standardized_output ? report.vartheta : report.theta;
      for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<std::string> cells = {number(x[i])};
        for (const auto& m : kMethods) cells.push_back(number(columns.at(m)[i]));
        row(cells);
      }
    }
  }
  return out;
}

std::string to_json(const ComparisonReport& report) {
  const RunConfig& c = report.config;
  Json j;
  j["command"] = std::string(command_name(c.command));
  j["model"] = model_json(c.model);
  j["order"] = c.order_k;
  j["centering"] = std::string(centering_name(c.centering));
  switch (c.command) {
    case Command::cumulants: {
      Json rows = Json::array();
      for (const auto& r : report.cumulant_rows) {
        Json o;
        o["source"] = r.source;
        o["mean"] = json_number(r.mean);
        o["sd"] = json_number(r.sd);
        o["kappa3"] = json_number(r.kappa3);
        o["kappa4"] = json_number(r.kappa4);
        o["kappa5"] = json_number(r.kappa5);
        rows.push_back(o);
      }
      j["cumulants"] = rows;
      break;
    }
    case Command::convergence: {
      j["ratio"] = c.ratio;
      const auto header = sweep_header();
      Json rows = Json::array();
      for (const auto& r : report.sweep_rows) {
        Json o;
        const auto values = sweep_values(r);
        o["n"] = r.n;
        for (std::size_t i = 1; i < header.size(); ++i) o[header[i]] = json_number(values[i]);
        rows.push_back(o);
      }
      j["sweep"] = rows;
      Json fits;
      for (const auto& [name, fit] : report.fits) {
        fits[name] = {{"slope", json_number(fit.slope)},
                      {"slope_se", json_number(fit.slope_se)},
                      {"intercept", json_number(fit.intercept)},
                      {"points", fit.points}};
      }
      j["fits"] = fits;
      break;
    }
    default: {
      j["scale"] = x_name(report);
      j["mean"] = json_number(report.mean);
      j["sd"] = json_number(report.sd);
      j[x_name(report)] = json_array(c.standardized_output ? report.vartheta : report.theta);
      Json dens;
      Json cdfs;
      for (const auto& m : kMethods) {
        dens[m] = json_array(report.density.at(m));
        cdfs[m] = json_array(report.cdf.at(m));
      }
      j["density"] = dens;
      j["cdf"] = cdfs;
      Json errs;
      for (const auto& m : kMethods) {
        if (m == "exact") continue;
        const MethodErrors& e = report.errors.at(m);
        errs[m] = {{"density_sup", json_number(e.density_sup)},
                   {"density_l1", json_number(e.density_l1)},
                   {"cdf_sup", json_number(e.cdf_sup)}};
      }
      j["errors"] = errs;
    }
  }
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

void emit_plot_data(const ComparisonReport& report, OutputFormat format, const std::string& path) {
  const std::string text = format == OutputFormat::csv ? to_csv(report) : to_json(report);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path);
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw IoError("failed writing output file: " + path);
}

void print_summary(const ComparisonReport& report, std::ostream& os) {
  const RunConfig& c = report.config;
  std::ostringstream s;
  s << std::setprecision(4);
  s << command_name(c.command) << "  model=" << to_string(c.model.family);
  for (const auto& [k, v] : c.model.hyperparameters) s << ' ' << k << '=' << v;
  if (c.command != Command::convergence) s << " n=" << c.model.n << " stat=" << c.model.statistic;
  s << "  order=" << c.order_k << '\n';

  switch (c.command) {
    case Command::cumulants:
      s << std::left << std::setw(10) << "source" << std::setw(14) << "mean" << std::setw(14) << "sd"
        << std::setw(14) << "kappa3" << std::setw(14) << "kappa4" << "kappa5\n";
      for (const auto& r : report.cumulant_rows) {
        s << std::setw(10) << r.source << std::setw(14) << r.mean << std::setw(14) << r.sd
          << std::setw(14) << r.kappa3 << std::setw(14) << r.kappa4 << r.kappa5 << '\n';
      }
      break;
    case Command::convergence:
      s << std::left << std::setw(8) << "n" << std::setw(14) << "ew_dens" << std::setw(14) << "ew_cdf"
        << std::setw(14) << "normal_dens" << std::setw(14) << "kappa3" << "recenter_dist\n";
      for (const auto& r : report.sweep_rows) {
        s << std::setw(8) << r.n << std::setw(14) << r.edgeworth_density_sup << std::setw(14)
          << r.edgeworth_cdf_sup << std::setw(14) << r.normal_density_sup << std::setw(14) << r.kappa3
          << r.recenter_distance << '\n';
      }
      s << "log-log slopes (smallest n dropped):\n";
      for (const auto& [name, fit] : report.fits) {
        s << "  " << std::setw(24) << name << std::showpos << std::setw(10) << fit.slope
          << std::noshowpos << " +/- " << fit.slope_se << '\n';
      }
      break;
    default:
      s << "posterior mean=" << report.mean << " sd=" << report.sd
        << "  selected=" << selected_method(c.centering) << '\n';
      s << std::left << std::setw(14) << "method" << std::setw(14) << "dens_sup" << std::setw(14)
        << "dens_L1" << "cdf_sup\n";
      for (const auto& m : kMethods) {
        if (m == "exact") continue;
        const MethodErrors& e = report.errors.at(m);
        s << std::setw(14) << m << std::setw(14) << e.density_sup << std::setw(14) << e.density_l1
          << e.cdf_sup << '\n';
      }
  }
  for (const auto& n : report.notes) s << "note: " << n << '\n';
  os << s.str();
}

}  // namespace edgepost::cli
