#include "edgepost/errors.hpp"

namespace edgepost {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out = "validation failed: ";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += "; ";
    out += items[i];
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(ErrorCategory::validation, join(violations)), violations_(std::move(violations)) {}

}  // namespace edgepost
