#include "ratlop/errors.hpp"

namespace ratlop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "validation";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Integrity: return "integrity";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Conflict: return "conflict";
    case ErrorCode::Input: return "input";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& message, nlohmann::json details) {
  throw Error(code, message, std::move(details));
}

}  // namespace ratlop
