#include "drfp/error.hpp"

namespace drfp {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::config:
      return "config";
    case ErrorCategory::dimension:
      return "dimension";
    case ErrorCategory::graph:
      return "graph";
    case ErrorCategory::infeasible:
      return "infeasible";
    case ErrorCategory::divergence:
      return "divergence";
    case ErrorCategory::convergence:
      return "convergence";
    case ErrorCategory::unsupported:
      return "unsupported";
    case ErrorCategory::io:
      return "io";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::config:
      return 2;
    case ErrorCategory::dimension:
      return 3;
    case ErrorCategory::graph:
      return 4;
    case ErrorCategory::infeasible:
      return 5;
    case ErrorCategory::divergence:
      return 6;
    case ErrorCategory::convergence:
      return 7;
    case ErrorCategory::unsupported:
      return 8;
    case ErrorCategory::io:
      return 9;
  }
  return 1;
}

}  // namespace drfp
