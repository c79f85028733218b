#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace drfp {

// Coarse failure classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
  config,
  dimension,
  graph,
  infeasible,
  divergence,
  convergence,
  unsupported,
  io,
};

std::string_view to_string(ErrorCategory category);
int exit_code(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace drfp
