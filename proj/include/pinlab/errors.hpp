#pragma once

#include <stdexcept>
#include <string>

namespace pinlab {

// Error categories, mapped to CLI exit codes (see tools/pinlab_main.cpp).
enum class ErrorKind {
  InvalidArgument,   // bad operation input (exit 3)
  Precondition,      // operation hypotheses not met (exit 3)
  Config,            // malformed config / unusable file (exit 2)
  Io,                // unreadable or unwritable path (exit 2)
  BoundViolation,    // a verified inequality failed (exit 4)
  Overflow,          // value left the representable range (exit 3)
  Scan               // scan bracket could not be established (exit 3)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

}  // namespace pinlab
