#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnlp {

enum class ErrorCode {
  InvalidInput,
  NoParse,
  UnknownWord,
  DimensionMismatch,
  Overflow,
  WidthMismatch,
  WidthExceeded,
  UnsupportedArity,
  VocabularyMiss,
  BasisTooLarge,
  UntaggedToken,
  ZeroVector,
  EmptyHyponymSet,
  ZeroOperator,
};

std::string_view to_string(ErrorCode code);

// True for errors caused by the linguistic content of an otherwise well-formed
// input (ungrammatical sentence, word missing from the vocabulary...).
bool is_domain_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qnlp
