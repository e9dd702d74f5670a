#ifndef EBGAS_ERRORS_HPP
#define EBGAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ebgas {

// Error classes map one-to-one onto the C API / CLI exit codes:
//   validation = 2, convergence = 3, data = 4.
enum class ErrorCode { internal = 1, validation = 2, convergence = 3, data = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Bad inputs, domain violations, model boundaries (ideal-gas divergence,
// HF saturation, polylog out of range).
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg) : Error(ErrorCode::validation, msg) {}
};

// Iteration, minimizer or root-bracketing failures.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg) : Error(ErrorCode::convergence, msg) {}
};

// File and pixel-level data problems.
class DataError : public Error {
 public:
  explicit DataError(const std::string& msg) : Error(ErrorCode::data, msg) {}
};

}  // namespace ebgas

#endif
