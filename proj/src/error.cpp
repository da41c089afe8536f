#include "qnlp/error.hpp"

namespace qnlp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NoParse: return "NoParse";
    case ErrorCode::UnknownWord: return "UnknownWord";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::WidthMismatch: return "WidthMismatch";
    case ErrorCode::WidthExceeded: return "WidthExceeded";
    case ErrorCode::UnsupportedArity: return "UnsupportedArity";
    case ErrorCode::VocabularyMiss: return "VocabularyMiss";
    case ErrorCode::BasisTooLarge: return "BasisTooLarge";
    case ErrorCode::UntaggedToken: return "UntaggedToken";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::EmptyHyponymSet: return "EmptyHyponymSet";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
  }
  return "Unknown";
}

bool is_domain_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoParse:
    case ErrorCode::UnknownWord:
    case ErrorCode::VocabularyMiss:
    case ErrorCode::UntaggedToken:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace qnlp
