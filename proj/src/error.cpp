#include "autopatch/error.hpp"

namespace autopatch {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedRecord: return "MalformedRecord";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::CountOutOfRange: return "CountOutOfRange";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::NonUtf8Input: return "NonUtf8Input";
    case ErrorCode::AnalyzerNotFound: return "AnalyzerNotFound";
    case ErrorCode::AnalyzerFailed: return "AnalyzerFailed";
    case ErrorCode::FunctionNotFound: return "FunctionNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyIndex: return "EmptyIndex";
    case ErrorCode::ModeArgumentMismatch: return "ModeArgumentMismatch";
    case ErrorCode::ServiceError: return "ServiceError";
    case ErrorCode::NoCodeBlockInResponse: return "NoCodeBlockInResponse";
    case ErrorCode::ReplayMiss: return "ReplayMiss";
    case ErrorCode::EmptyGroundTruth: return "EmptyGroundTruth";
    case ErrorCode::BothEmpty: return "BothEmpty";
    case ErrorCode::CompilerNotFound: return "CompilerNotFound";
    case ErrorCode::CompileError: return "CompileError";
    case ErrorCode::BinaryNotFound: return "BinaryNotFound";
    case ErrorCode::NonpositiveBaseline: return "NonpositiveBaseline";
    case ErrorCode::NoCommonExecutableSet: return "NoCommonExecutableSet";
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code),
      detail_(detail) {}

}  // namespace autopatch
