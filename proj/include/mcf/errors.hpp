#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcf {

// Every failure raised by the library carries one of these codes so that
// callers (the CLI in particular) can tell hypothesis/validation failures
// apart from numerical breakdowns.
enum class ErrorCode {
  Domain,
  Axis,
  SeedTooCoarse,
  BlowupDetected,
  NonPositiveTail,
  PositivityViolated,
  GridMismatch,
  BranchAmbiguous,
  NonConvergence,
  TailTooFat,
  NewtonDiverged,
  QNonPositive,
  WindowTooNarrow,
  SampleOutsideValidity,
  ConePrerequisiteFailed,
  HypothesisFailed,
  Io,
};

std::string_view to_string(ErrorCode code);

// True for codes that signal a violated precondition or hypothesis rather
// than an internal numerical failure.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mcf
