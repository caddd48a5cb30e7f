#include "iamlearn/error.hpp"

namespace iamlearn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MissingSection: return "MissingSection";
    case ErrorKind::UnknownProjectId: return "UnknownProjectId";
    case ErrorKind::DuplicateProjectId: return "DuplicateProjectId";
    case ErrorKind::MalformedRecord: return "MalformedRecord";
    case ErrorKind::EmptySubset: return "EmptySubset";
    case ErrorKind::EmptyElection: return "EmptyElection";
    case ErrorKind::TooFewVoters: return "TooFewVoters";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnequalSizes: return "UnequalSizes";
    case ErrorKind::WrongArity: return "WrongArity";
    case ErrorKind::BadArity: return "BadArity";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::EmptyComponent: return "EmptyComponent";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::EmptyChain: return "EmptyChain";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InvalidModel: return "InvalidModel";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace iamlearn
