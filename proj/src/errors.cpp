#include "mcf/errors.hpp"

namespace mcf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain: return "DomainError";
    case ErrorCode::Axis: return "AxisError";
    case ErrorCode::SeedTooCoarse: return "SeedTooCoarse";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
    case ErrorCode::NonPositiveTail: return "NonPositiveTail";
    case ErrorCode::PositivityViolated: return "PositivityViolated";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::BranchAmbiguous: return "BranchAmbiguous";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::TailTooFat: return "TailTooFat";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::QNonPositive: return "QNonPositive";
    case ErrorCode::WindowTooNarrow: return "WindowTooNarrow";
    case ErrorCode::SampleOutsideValidity: return "SampleOutsideValidity";
    case ErrorCode::ConePrerequisiteFailed: return "ConePrerequisiteFailed";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::Io: return "IoError";
  }
  return "UnknownError";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::Domain:
    case ErrorCode::Axis:
    case ErrorCode::GridMismatch:
    case ErrorCode::BranchAmbiguous:
    case ErrorCode::TailTooFat:
    case ErrorCode::WindowTooNarrow:
    case ErrorCode::SampleOutsideValidity:
    case ErrorCode::ConePrerequisiteFailed:
    case ErrorCode::HypothesisFailed:
    case ErrorCode::NonPositiveTail:
    case ErrorCode::Io:
      return true;
    default:
      return false;
  }
}

}  // namespace mcf
