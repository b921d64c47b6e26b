#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace factorder {

enum class ErrorKind {
  configuration,    // bad parameters: k < 1, folds out of range, alpha outside (0,1)
  validation,       // malformed catalog names, invalid dataset at a library entry point
  unknown_type,     // a fact-type name that does not resolve in the catalog
  duplicate_fact,   // the same fact type given twice in one input set
  encoding,         // remaining facts and placed prefix overlap
  contract,         // caller violated an operation precondition
  training,         // nothing to train on, or training data inconsistent with the planner
  prediction,       // empty legal set
  input,            // planner input of the wrong cardinality
  compatibility,    // planner applied to facts from another catalog
  deserialization,  // persisted form is malformed
  data,             // a dataset or schema file is malformed
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::validation: return "validation error";
    case ErrorKind::unknown_type: return "unknown fact type";
    case ErrorKind::duplicate_fact: return "duplicate fact";
    case ErrorKind::encoding: return "encoding error";
    case ErrorKind::contract: return "contract violation";
    case ErrorKind::training: return "training error";
    case ErrorKind::prediction: return "prediction error";
    case ErrorKind::input: return "input error";
    case ErrorKind::compatibility: return "compatibility error";
    case ErrorKind::deserialization: return "deserialization error";
    case ErrorKind::data: return "data error";
  }
  return "error";
}

/// The single exception type thrown by the library; `kind()` classifies it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace factorder
