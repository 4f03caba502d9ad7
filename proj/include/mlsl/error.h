#ifndef MLSL_ERROR_H_
#define MLSL_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mlsl {

enum class ErrorCode {
  kMalformedLine,
  kSpanMismatch,
  kDanglingRef,
  kUnknownType,
  kOverlappingEntities,
  kLabelCollision,
  kSequenceTooLong,
  kShapeMismatch,
  kUnknownLabel,
  kLengthMismatch,
  kDocIdMismatch,
  kIo,
  kUsage,
  kDivergence,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The message is a
// single line so the CLI can print it verbatim.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mlsl

#endif  // MLSL_ERROR_H_
