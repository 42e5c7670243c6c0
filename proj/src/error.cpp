#include "bdns/error.hpp"

namespace bdns {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPowerOfTwo: return "NonPowerOfTwo";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonZeroMean: return "NonZeroMean";
    case ErrorCode::BlockOutOfRange: return "BlockOutOfRange";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::GammaNotAdmissible: return "GammaNotAdmissible";
    case ErrorCode::AlphaBelowLame: return "AlphaBelowLame";
    case ErrorCode::ModelInvalid: return "ModelInvalid";
    case ErrorCode::VacuumApproach: return "VacuumApproach";
    case ErrorCode::IncompatibleCurl: return "IncompatibleCurl";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::UnknownScenario: return "UnknownScenario";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace bdns
