#pragma once

#include <stdexcept>
#include <string>

namespace bpl {

// Mirrors bpl_status in include/bpl/bpl.h; keep the numeric values in sync.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Config = 2,
  Io = 3,
  BadMagic = 4,
  VersionMismatch = 5,
  Truncated = 6,
  MeanNotZero = 7,
  OutOfBand = 8,
  GridMismatch = 9,
  BlowupDetected = 10,
  Geometry = 11,
  Degenerate = 12,
  SamplerTime = 13,
  CflViolation = 14,
  Internal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the integrator; carries the simulation time at which the state went bad.
class BlowupError : public Error {
 public:
  BlowupError(double t, const std::string& what) : Error(ErrorCode::BlowupDetected, what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace bpl
