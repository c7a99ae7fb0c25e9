#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace autopatch {

enum class ErrorCode {
  // corpus
  FileNotFound,
  MalformedRecord,
  DuplicateId,
  CountOutOfRange,
  UnknownId,
  // cfg extraction
  NonUtf8Input,
  AnalyzerNotFound,
  AnalyzerFailed,
  FunctionNotFound,
  ParseError,
  // retrieval
  ProviderUnavailable,
  EmptyInput,
  DimMismatch,
  ZeroVector,
  EmptyIndex,
  // prompting
  ModeArgumentMismatch,
  ServiceError,
  NoCodeBlockInResponse,
  ReplayMiss,
  // evaluation
  EmptyGroundTruth,
  BothEmpty,
  CompilerNotFound,
  CompileError,
  BinaryNotFound,
  NonpositiveBaseline,
  NoCommonExecutableSet,
  // plumbing
  Usage,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message holds the positional or diagnostic detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace autopatch
