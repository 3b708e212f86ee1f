#pragma once

#include <stdexcept>
#include <string>

namespace nsdp {

enum class ErrorCode {
  InvalidInput,
  NotFound,
  StartNotFeasible,
};

/// Exception type thrown by every toolkit operation that rejects its input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidInput, what);
}

}  // namespace nsdp
