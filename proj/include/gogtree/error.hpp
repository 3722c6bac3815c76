#pragma once

#include <stdexcept>
#include <string>

namespace gogtree {

/// Library-level error. Messages are meant to be shown to users verbatim.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// DSL / word syntax error carrying a source location.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")"),
        raw_(msg), line_(line), col_(col) {}
  const std::string& raw() const { return raw_; }
  int line() const { return line_; }
  int col() const { return col_; }

private:
  std::string raw_;
  int line_;
  int col_;
};

}  // namespace gogtree
