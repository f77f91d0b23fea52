#pragma once

#include <string>
#include <string_view>
#include <stdexcept>

#include <json.hpp>

namespace ratlop {

enum class ErrorCode {
  Validation,  // domain rule violated by otherwise well-formed input
  NotFound,
  Integrity,   // stored scores disagree with recomputation
  Infeasible,
  Conflict,
  Input,       // unreadable or malformed document/file
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries a code from the closed set above
/// and optional structured details (violation lists, row errors).
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message,
        nlohmann::json details = nullptr)
      : std::runtime_error(message), code_(code), details_(std::move(details)) {}

  ErrorCode code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

private:
  ErrorCode code_;
  nlohmann::json details_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message,
                       nlohmann::json details = nullptr);

}  // namespace ratlop
