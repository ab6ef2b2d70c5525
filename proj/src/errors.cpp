#include "specseq/errors.hpp"

namespace specseq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::RefinementError: return "REFINEMENT_ERROR";
    case ErrorCode::ShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::IllDefinedHom: return "ILL_DEFINED_HOM";
    case ErrorCode::CompositionNonzero: return "COMPOSITION_NONZERO";
    case ErrorCode::NotInvertible: return "NOT_INVERTIBLE";
    case ErrorCode::UnknownAtlas: return "UNKNOWN_ATLAS";
    case ErrorCode::StableRangeExceeded: return "STABLE_RANGE_EXCEEDED";
    case ErrorCode::NotStabilized: return "NOT_STABILIZED";
    case ErrorCode::BidegreeViolation: return "BIDEGREE_VIOLATION";
    case ErrorCode::NotConverged: return "NOT_CONVERGED";
    case ErrorCode::NoncommutingDifferentials: return "NONCOMMUTING_DIFFERENTIALS";
    case ErrorCode::HypothesisNotAcknowledged: return "HYPOTHESIS_NOT_ACKNOWLEDGED";
    case ErrorCode::DegreeOutOfRange: return "DEGREE_OUT_OF_RANGE";
  }
  return "UNKNOWN";
}

}  // namespace specseq
