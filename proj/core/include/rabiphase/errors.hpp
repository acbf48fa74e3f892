#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rabiphase {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the supported domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Eigenproblem has (numerically) coincident eigenvalues.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Root finder found no sign change in its bracket.
class NoSolutionError : public Error {
 public:
  using Error::Error;
};

/// Self-consistency equation has more than one root; all are reported.
class MultipleRootsError : public Error {
 public:
  MultipleRootsError(const std::string& what, std::vector<double> roots)
      : Error(what), roots_(std::move(roots)) {}
  const std::vector<double>& roots() const noexcept { return roots_; }

 private:
  std::vector<double> roots_;
};

/// Closed form evaluated at (or too close to) a resonance pole.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Time integration lost unitarity beyond its budget.
class DivergedError : public Error {
 public:
  using Error::Error;
};

/// Resonance search failed to bracket a root or minimum.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace rabiphase
