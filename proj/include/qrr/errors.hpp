#pragma once

#include <stdexcept>
#include <string>

namespace qrr {

enum class errc {
  not_invertible,
  non_terminating,
  bad_parameters,
  non_integer_exponent,
  divergent,
  overflow_unsound,
  index_out_of_range,
  insufficient_truncation,
  exact_division_failed,
  unbound_variable,
  duplicate_name,
  syntax,
  io,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::not_invertible: return "NotInvertible";
    case errc::non_terminating: return "NonTerminating";
    case errc::bad_parameters: return "BadParameters";
    case errc::non_integer_exponent: return "NonIntegerExponent";
    case errc::divergent: return "Divergent";
    case errc::overflow_unsound: return "OverflowUnsound";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::insufficient_truncation: return "InsufficientTruncation";
    case errc::exact_division_failed: return "ExactDivisionFailed";
    case errc::unbound_variable: return "UnboundVariable";
    case errc::duplicate_name: return "DuplicateName";
    case errc::syntax: return "SyntaxError";
    case errc::io: return "IoError";
  }
  return "Error";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

class syntax_error : public error {
 public:
  syntax_error(int line, int column, const std::string& expected)
      : error(errc::syntax,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + expected),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace qrr
