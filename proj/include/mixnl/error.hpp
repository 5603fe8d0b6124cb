#pragma once

#include <stdexcept>
#include <string>

namespace mixnl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// The requested object is degenerate (empty measure, zero density, ...).
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// Singular-kernel quadrature did not meet its tolerance on some cell pair.
class AssemblyError : public Error {
public:
  AssemblyError(const std::string& what, int cell_a, int cell_b, double estimate)
      : Error(what), cell_a(cell_a), cell_b(cell_b), estimate(estimate)
  {
  }
  int cell_a;
  int cell_b;
  double estimate;
};

class SolverError : public Error {
public:
  using Error::Error;
};

/// The sampled geometry (mountain pass or linking) could not be certified.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// The mountain-pass path collapsed onto the trivial critical point.
class DegeneratePathError : public SolverError {
public:
  using SolverError::SolverError;
};

class NonConvergenceError : public SolverError {
public:
  using SolverError::SolverError;
};

/// Invalid run configuration; `key` names the first offending entry.
class ConfigError : public Error {
public:
  ConfigError(const std::string& key, const std::string& what)
      : Error(key.empty() ? what : key + ": " + what), key(key)
  {
  }
  std::string key;
};

} // namespace mixnl
