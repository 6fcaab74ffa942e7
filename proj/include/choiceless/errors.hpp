#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace choiceless {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: programs, structure files, matrix files.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0,
             std::size_t column = 0)
      : Error(line == 0 ? what
                        : std::to_string(line) + ":" + std::to_string(column) +
                              ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An exhaustive search or materialization would exceed a named size limit.
class GuardError : public Error {
 public:
  GuardError(std::string limit, const std::string& what)
      : Error(what), limit_(std::move(limit)) {}

  const std::string& limit() const { return limit_; }

 private:
  std::string limit_;
};

/// Evaluation of Card in a run where the cardinality builtin is switched off.
class UnsupportedSymbolError : public Error {
 public:
  using Error::Error;
};

}  // namespace choiceless
