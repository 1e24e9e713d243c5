#pragma once

#include <stdexcept>
#include <string>

namespace iongrad {

// Error taxonomy shared by the whole library. The CLI maps kinds to exit codes:
// validation/regime/capacity -> 2, numerical -> 3.
enum class ErrorKind {
  validation,  // malformed or out-of-domain input
  regime,      // input outside a model's validity range
  numerical,   // iteration/convergence failure
  capacity,    // request exceeds a hard size cap
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_validation(const std::string& msg) {
  throw Error(ErrorKind::validation, msg);
}
[[noreturn]] inline void throw_regime(const std::string& msg) {
  throw Error(ErrorKind::regime, msg);
}
[[noreturn]] inline void throw_numerical(const std::string& msg) {
  throw Error(ErrorKind::numerical, msg);
}
[[noreturn]] inline void throw_capacity(const std::string& msg) {
  throw Error(ErrorKind::capacity, msg);
}

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw_validation(msg);
}

}  // namespace iongrad
