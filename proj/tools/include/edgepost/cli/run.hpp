#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "edgepost/convergence.hpp"
#include "edgepost/models.hpp"

namespace edgepost::cli {

enum class Command { cumulants, density, cdf, compare, convergence };
enum class CenteringChoice { posterior_mean, mle, recentered };
enum class OutputFormat { csv, json };
enum class CumulantSource { exact, laplace };
enum class OracleSource { closed_form, quadrature };

struct Grid {
  double lo = -4.0;
  double hi = 4.0;
  int points = 401;
};

struct RunConfig {
  Command command = Command::compare;
  BuiltinModel model = beta_binomial(0.5, 4.0, 5, 2);
  int order_k = 3;
  CenteringChoice centering = CenteringChoice::posterior_mean;
  Grid grid;                        // standardized units unless theta_grid
  bool theta_grid = false;
  bool standardized_output = false; // emit on the standardized scale
  std::vector<int> sweep;
  double ratio = 0.4;
  OutputFormat format = OutputFormat::csv;
  std::string output_path;          // empty: no data file
  double quad_tolerance = 1e-12;
  CumulantSource cumulant_source = CumulantSource::exact;
  OracleSource oracle_source = OracleSource::closed_form;
};

/// Throws ValidationError listing every problem.
void validate(const RunConfig& config);

/// Method columns, in output order.
inline const std::vector<std::string> kMethods = {"exact", "normal", "edgeworth", "mle_centered",
                                                  "recentered"};

struct MethodErrors {
  double density_sup = 0.0;
  double density_l1 = 0.0;
  double cdf_sup = 0.0;
};

struct CumulantRow {
  std::string source;
  double mean = 0.0;
  double sd = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  double kappa5 = 0.0;
};

struct SweepRow {
  int n = 0;
  double edgeworth_density_sup = 0.0;
  double edgeworth_cdf_sup = 0.0;
  double normal_density_sup = 0.0;
  double normal_cdf_sup = 0.0;
  double mle_density_sup = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  double kappa5 = 0.0;
  double laplace_kappa3 = 0.0;
  double laplace_kappa4 = 0.0;
  double laplace_kappa5 = 0.0;
  double beta2_rel_error = 0.0;
  double recenter_distance = 0.0;
  std::vector<double> mle_coefficients;  // Hermite degrees 1..6
};

struct ComparisonReport {
  RunConfig config;
  // Grid commands.
  std::vector<double> theta;
  std::vector<double> vartheta;
  double mean = 0.0;
  double sd = 0.0;
  std::map<std::string, std::vector<double>> density;  // theta scale
  std::map<std::string, std::vector<double>> cdf;
  std::map<std::string, MethodErrors> errors;
  std::vector<std::string> notes;
  // cumulants command.
  std::vector<CumulantRow> cumulant_rows;
  // convergence command.
  std::vector<SweepRow> sweep_rows;
  std::vector<std::pair<std::string, SlopeFit>> fits;
};

ComparisonReport run(const RunConfig& config);

/// Writes the report's data in the configured format. Throws IoError.
void emit_plot_data(const ComparisonReport& report, OutputFormat format, const std::string& path);

std::string to_csv(const ComparisonReport& report);
std::string to_json(const ComparisonReport& report);

void print_summary(const ComparisonReport& report, std::ostream& os);

/// Thrown by parse_arguments for --help.
struct HelpRequested {
  std::string text;
};

/// Parses argv into a RunConfig. Throws ValidationError on bad input.
RunConfig parse_arguments(int argc, const char* const* argv);

/// Full command-line entry point; returns the process exit status
/// (0 ok, 2 config, 3 oracle, 4 expansion, 5 io).
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace edgepost::cli
