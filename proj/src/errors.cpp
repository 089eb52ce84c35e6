#include "pbp/errors.hpp"

#include <sstream>

namespace pbp {

const char* error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::usage: return "UsageError";
    case ErrorKind::singular_point: return "SingularPoint";
    case ErrorKind::step_underflow: return "StepUnderflow";
    case ErrorKind::side_violation: return "SideViolation";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::degenerate_increment: return "DegenerateIncrement";
    case ErrorKind::invalid_branch: return "InvalidBranch";
    case ErrorKind::junction_mismatch: return "JunctionMismatch";
    case ErrorKind::io: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

namespace {
std::string junction_message(double time, double gap) {
  std::ostringstream os;
  os.precision(17);
  os << "junction at t=" << time << " has gap " << gap;
  return os.str();
}
}  // namespace

JunctionMismatch::JunctionMismatch(double time, double gap)
    : Error(ErrorKind::junction_mismatch, junction_message(time, gap)), time_(time), gap_(gap) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace pbp
