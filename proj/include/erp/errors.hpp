#pragma once

#include <stdexcept>
#include <string>

namespace erp {

// One error type for the whole library. The kind is what callers dispatch
// on (the C API maps it to a status code); the message is for humans.
enum class ErrorKind {
  invalid_argument,        // bad parameter value
  length,                  // sequence too short for the operation
  shape,                   // mismatched dimensions / metadata
  empty_input,             // operation requires a nonempty input
  undefined_input,         // result mathematically undefined for this input
  insufficient_structure,  // input lacks the structure the feature needs
  convergence,             // iterative solver hit its cap
  config,                  // malformed configuration / registry / layout
  io,                      // file missing, unreadable or unwritable
  internal,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace erp
