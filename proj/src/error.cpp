#include "bnys/error.hpp"

namespace bnys {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DuplicateIndex: return "DuplicateIndex";
    case ErrorCode::NotEnoughCandidates: return "NotEnoughCandidates";
    case ErrorCode::TooManyClusters: return "TooManyClusters";
    case ErrorCode::InconsistentBlock: return "InconsistentBlock";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::ZeroLearners: return "ZeroLearners";
    case ErrorCode::MalformedName: return "MalformedName";
    case ErrorCode::NotEnoughColumns: return "NotEnoughColumns";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::ZeroTarget: return "ZeroTarget";
    case ErrorCode::DegenerateSamples: return "DegenerateSamples";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

}  // namespace bnys
