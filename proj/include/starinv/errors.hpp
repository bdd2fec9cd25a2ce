#ifndef STARINV_ERRORS_HPP
#define STARINV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starinv {

/// Malformed input text. Line and column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& what)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Well-formed input that violates a structural invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request that is meaningless for the given data (unbound variable, open formula, ...).
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace starinv

#endif
