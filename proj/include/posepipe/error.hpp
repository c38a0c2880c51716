#pragma once

#include <stdexcept>
#include <string>

namespace posepipe {

enum class ErrorKind {
  Usage,         // bad arguments or configuration
  Parse,         // malformed input document
  OutOfVocabulary,
  MissingPhone,  // unit absent from the phoneme-pose dictionary
  Io,
  Invariant,     // internal consistency violated
};

/// Single exception type for the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Same error with "stage: " prepended to the message.
  Error tagged(const std::string& stage) const {
    return Error(kind_, stage + ": " + what());
  }

private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::OutOfVocabulary: return "out-of-vocabulary";
    case ErrorKind::MissingPhone: return "missing-phone";
    case ErrorKind::Io: return "io";
    case ErrorKind::Invariant: return "invariant";
  }
  return "unknown";
}

}  // namespace posepipe
