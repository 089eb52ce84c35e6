#pragma once

#include <stdexcept>
#include <string>

namespace pbp {

// Every failure raised by the library carries one of these kinds. The names
// returned by error_name() are stable and appear verbatim in CLI output.
enum class ErrorKind {
  usage,
  singular_point,
  step_underflow,
  side_violation,
  non_finite,
  degenerate_increment,
  invalid_branch,
  junction_mismatch,
  io,
};

const char* error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const char* name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

class JunctionMismatch : public Error {
 public:
  JunctionMismatch(double time, double gap);

  double time() const noexcept { return time_; }
  double gap() const noexcept { return gap_; }

 private:
  double time_;
  double gap_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorKind::usage, message);
}

}  // namespace pbp
