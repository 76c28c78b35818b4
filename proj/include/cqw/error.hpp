#pragma once

#include <stdexcept>
#include <string>

namespace cqw {

enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kOutOfRange = 3,
  kNumerical = 4,
  kIo = 5,
  kParse = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace cqw
