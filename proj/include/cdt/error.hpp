#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cdt {

/// Base class of all exceptions raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position` is a 0-based character offset into the
/// parsed text (or a 1-based line number for line-oriented formats, see
/// `line`).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position, std::size_t line = 0)
      : Error(what + " (at " + (line ? "line " + std::to_string(line) + ", " : std::string()) +
              "offset " + std::to_string(position) + ")"),
        position_(position),
        line_(line) {}

  std::size_t position() const { return position_; }
  std::size_t line() const { return line_; }

 private:
  std::size_t position_;
  std::size_t line_;
};

class UnknownAxiom : public Error {
 public:
  explicit UnknownAxiom(int id) : Error("unknown axiom id " + std::to_string(id)), id_(id) {}
  int id() const { return id_; }

 private:
  int id_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace cdt
