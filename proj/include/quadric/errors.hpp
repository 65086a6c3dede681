#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace quadric {

/// Library error with a machine-readable tag and the process exit code the
/// CLI maps it to (2 = input error, 3 = degenerate geometry).
class Error : public std::runtime_error {
 public:
  Error(std::string code, int exit_code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)), exit_code_(exit_code) {}

  const std::string& code() const { return code_; }
  int exit_code() const { return exit_code_; }

 private:
  std::string code_;
  int exit_code_;
};

namespace errors {

[[noreturn]] inline void raise(const char* code, int exit_code, const std::string& msg) {
  throw Error(code, exit_code, msg);
}

[[noreturn]] inline void invalid(const std::string& msg) { raise("invalid_argument", 2, msg); }
[[noreturn]] inline void domain(const std::string& msg) { raise("domain", 2, msg); }
[[noreturn]] inline void zero_set(const std::string& msg) { raise("zero_set", 2, msg); }
[[noreturn]] inline void positivity(const std::string& msg) { raise("positivity", 2, msg); }
[[noreturn]] inline void parameter_mismatch(const std::string& msg) {
  raise("parameter_mismatch", 2, msg);
}
[[noreturn]] inline void unsupported_strategy(const std::string& msg) {
  raise("unsupported_strategy", 2, msg);
}
[[noreturn]] inline void no_solution(const std::string& msg) { raise("no_solution", 2, msg); }
[[noreturn]] inline void excluded_case(const std::string& msg) { raise("excluded_case", 2, msg); }
[[noreturn]] inline void unrepresentable(const std::string& msg) {
  raise("unrepresentable", 2, msg);
}
[[noreturn]] inline void no_elements(const std::string& msg) { raise("no_elements", 2, msg); }
[[noreturn]] inline void sampling(const std::string& msg) { raise("sampling", 2, msg); }
[[noreturn]] inline void parse(const std::string& msg) { raise("parse", 2, msg); }
[[noreturn]] inline void degenerate_geometry(const std::string& msg) {
  raise("degenerate_geometry", 3, msg);
}

}  // namespace errors
}  // namespace quadric
