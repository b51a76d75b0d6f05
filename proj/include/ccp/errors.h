#ifndef CCP_ERRORS_H_
#define CCP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ccp {

// Base of every error thrown by the library. The CLI maps the concrete
// subclass onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: malformed files, out-of-range parameters, shape mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Parse failure with the 1-based line number of the offending line.
class ParseError : public ValidationError {
 public:
  ParseError(int line, const std::string& message)
      : ValidationError("line " + std::to_string(line) + ": " + message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// No communication plan satisfies the constraints.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Average delay requested over a graph with no selected links.
class NoLinksError : public Error {
 public:
  using Error::Error;
};

// Instance exceeds what an exhaustive search is allowed to enumerate.
class SizeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Division by a zero rate or similar.
class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// rate_control could not reach the requested bit budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccp

#endif  // CCP_ERRORS_H_
