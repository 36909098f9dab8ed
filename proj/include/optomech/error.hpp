#pragma once

#include <stdexcept>
#include <string>

namespace optomech {

enum class ErrorKind {
  InvalidGeometry,
  InvalidMode,
  InvalidArgument,
  OutOfRange,
  Degenerate,
  Singular,
  InsufficientData,
  Config,
  Data,
  Diverged,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

/// Process exit code for the CLI: 2 config, 3 data, 4 numerical divergence.
int exit_code_for(ErrorKind kind);

}  // namespace optomech
