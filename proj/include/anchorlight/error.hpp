#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anchorlight {

enum class ErrorCode {
  CorruptIndex,
  SchemaMismatch,
  StorageFailure,
  WriteRejected,
  InvalidTerm,
  DanglingReference,
  UnknownScoreTable,
  MissingConstant,
  StemmingLocked,
  ReadOnly,
  ZeroGraph,
  InvalidWeight,
  EmptyGraph,
  EmptyQuery,
  NeedsAnalysis,
  InvalidScheme,
  UnknownScorer,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anchorlight
