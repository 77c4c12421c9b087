#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bnys {

enum class ErrorCode {
  NonSquare,
  NotSymmetric,
  RankOutOfRange,
  SingularSystem,
  TooFewPoints,
  DimensionMismatch,
  IndexOutOfRange,
  DuplicateIndex,
  NotEnoughCandidates,
  TooManyClusters,
  InconsistentBlock,
  TooLarge,
  EmptyModel,
  ZeroLearners,
  MalformedName,
  NotEnoughColumns,
  InvalidConfig,
  IoError,
  RaggedRows,
  NonNumericCell,
  ZeroTarget,
  DegenerateSamples,
  SchemaMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception; `code()` lets
// callers and tests distinguish the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bnys
