#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

/// Failure categories. The numeric values are part of the C API.
enum class ErrorCode : int {
  invalid_argument = 1,
  domain_error = 2,
  near_singular = 3,
  tolerance_exceeded = 4,
  budget_exceeded = 5,
  config_error = 6,
  io_error = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace decaylab
