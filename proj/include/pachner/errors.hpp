#pragma once

#include <stdexcept>
#include <string>

namespace pachner {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed gluing data: unpaired, non-involutive or self-glued faces.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, int tet = -1, int face = -1)
      : Error(what), tet_(tet), face_(face) {}
  int tet() const { return tet_; }
  int face() const { return face_; }

 private:
  int tet_;
  int face_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A move or composite operation was asked for where its hypotheses fail.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace pachner
