#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace circtrade {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

// Malformed input record. line() is 1-based; 0 when no line applies.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class SelfLoopError : public ParseError {
public:
  using ParseError::ParseError;
};

class IndexError : public Error {
public:
  using Error::Error;
};

class EmptyWeights : public Error {
public:
  using Error::Error;
};

class NonPositiveWeight : public Error {
public:
  using Error::Error;
};

class NoNeighbors : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NodeIdOutOfRange : public Error {
public:
  using Error::Error;
};

class ZeroVector : public Error {
public:
  using Error::Error;
};

class LengthMismatch : public Error {
public:
  using Error::Error;
};

class DegenerateDimension : public Error {
public:
  using Error::Error;
};

class ConfigInfeasible : public Error {
public:
  using Error::Error;
};

// A configuration value violates its invariant.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace circtrade
