#include "mlsl/error.h"

namespace mlsl {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kSpanMismatch: return "SpanMismatch";
    case ErrorCode::kDanglingRef: return "DanglingRef";
    case ErrorCode::kUnknownType: return "UnknownType";
    case ErrorCode::kOverlappingEntities: return "OverlappingEntities";
    case ErrorCode::kLabelCollision: return "LabelCollision";
    case ErrorCode::kSequenceTooLong: return "SequenceTooLong";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kDocIdMismatch: return "DocIdMismatch";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUsage: return "Usage";
    case ErrorCode::kDivergence: return "Divergence";
  }
  return "Unknown";
}

}  // namespace mlsl
