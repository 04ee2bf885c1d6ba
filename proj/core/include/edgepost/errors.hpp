#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace edgepost {

// Coarse failure classes. The command-line tool maps these onto exit codes.
enum class ErrorCategory {
  validation,  // bad input: hyperparameters, config, orders
  oracle,      // exact/quadrature posterior could not be computed
  expansion,   // asymptotic pipeline failed (centering, curvature, recentering)
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class UnsupportedOrderError : public Error {
 public:
  explicit UnsupportedOrderError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class InsufficientOrderError : public Error {
 public:
  explicit InsufficientOrderError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what)
      : Error(ErrorCategory::validation, what) {}
};

/// Quadrature did not reach the requested tolerance.
class OracleFailure : public Error {
 public:
  OracleFailure(const std::string& what, double achieved_error)
      : Error(ErrorCategory::oracle, what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

class DerivativeError : public Error {
 public:
  DerivativeError(const std::string& what, int order, double point)
      : Error(ErrorCategory::expansion, what), order_(order), point_(point) {}

  int order() const noexcept { return order_; }
  double point() const noexcept { return point_; }

 private:
  int order_;
  double point_;
};

class CurvatureError : public Error {
 public:
  explicit CurvatureError(const std::string& what)
      : Error(ErrorCategory::expansion, what) {}
};

class BoundaryMaximumError : public Error {
 public:
  explicit BoundaryMaximumError(const std::string& what)
      : Error(ErrorCategory::expansion, what) {}
};

class NonUnimodalError : public Error {
 public:
  explicit NonUnimodalError(const std::string& what)
      : Error(ErrorCategory::expansion, what) {}
};

class CenteringError : public Error {
 public:
  CenteringError(const std::string& what, std::vector<double> trace)
      : Error(ErrorCategory::expansion, what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

class DegenerateRecenteringError : public Error {
 public:
  explicit DegenerateRecenteringError(const std::string& what)
      : Error(ErrorCategory::expansion, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

}  // namespace edgepost
