#pragma once

#include <stdexcept>
#include <string>

namespace survmix {

// Coarse failure categories, kept aligned with the C API status codes and
// the CLI exit codes (invalid -> usage, data -> bad input, numeric -> solver
// or sampler failure).
enum class ErrorKind { invalid, data, numeric };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::invalid, what);
}
[[noreturn]] inline void throw_data(const std::string& what) {
  throw Error(ErrorKind::data, what);
}
[[noreturn]] inline void throw_numeric(const std::string& what) {
  throw Error(ErrorKind::numeric, what);
}

}  // namespace survmix
