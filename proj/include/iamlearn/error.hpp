#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace iamlearn {

enum class ErrorKind {
  MissingSection,
  UnknownProjectId,
  DuplicateProjectId,
  MalformedRecord,
  EmptySubset,
  EmptyElection,
  TooFewVoters,
  DimensionMismatch,
  UnequalSizes,
  WrongArity,
  BadArity,
  TooLarge,
  EmptyComponent,
  BadConfig,
  EmptyChain,
  DegenerateInput,
  InvalidModel,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace iamlearn
