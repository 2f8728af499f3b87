#pragma once

#include <stdexcept>
#include <string>

namespace seapos {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain,
  Degenerate,
  Arity,
  PointAtInfinity,
  TimeOrder,
  FilterDegeneracy,
  Coverage,
  EmptyReport,
  Parse,
  Io,
  Generation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// Degenerate DLT geometry. Carries the design-matrix condition estimate so the
// caller can report how close to rank deficiency the calibration was.
class DegenerateError : public Error {
public:
  DegenerateError(const std::string& what, double condition)
      : Error(ErrorCode::Degenerate, what), condition_(condition) {}
  double condition() const { return condition_; }

private:
  double condition_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace seapos
