#pragma once

#include <stdexcept>
#include <string>

namespace holorigid {

// Base class for all errors raised by the library. The CLI maps subclasses
// to process exit codes; library callers can catch them individually.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input: bad JSON, schema violations, invalid map
// descriptions, parameters that make a construction impossible. Exit code 2.
class InputError : public Error {
 public:
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// An operation required an expansion certificate and the model has none.
// Exit code 3.
class UncertifiedModelError : public Error {
 public:
  explicit UncertifiedModelError(const std::string& msg) : Error(msg) {}
};

// The map falls into one of the excluded degenerate families (chebyshev-like
// or power-like) for which the comparison pipeline is not applicable.
// Exit code 4.
class DegenerateMapError : public Error {
 public:
  DegenerateMapError(const std::string& msg, bool chebyshev, bool power_like)
      : Error(msg), chebyshev(chebyshev), power_like(power_like) {}
  bool chebyshev = false;
  bool power_like = false;
};

// Root finding could not account for the expected number of solutions.
class SolverFailureError : public Error {
 public:
  explicit SolverFailureError(const std::string& msg) : Error(msg) {}
};

// No connecting orbit segment was found within the configured search budget.
class BridgeNotFoundError : public Error {
 public:
  explicit BridgeNotFoundError(const std::string& msg) : Error(msg) {}
};

// A construction produced a model with no states.
class EmptyModelError : public Error {
 public:
  explicit EmptyModelError(const std::string& msg) : Error(msg) {}
};

// An operation that requires a transitive model received a non-transitive one.
class NonTransitiveError : public Error {
 public:
  explicit NonTransitiveError(const std::string& msg) : Error(msg) {}
};

// Root bracketing failed: the pressure has no sign change on the seed
// interval (typically an entropy-zero model).
class NoSignChangeError : public Error {
 public:
  explicit NoSignChangeError(const std::string& msg) : Error(msg) {}
};

// The two models' transition graphs admit no label-compatible isomorphism.
class GraphMismatchError : public Error {
 public:
  explicit GraphMismatchError(const std::string& msg) : Error(msg) {}
};

}  // namespace holorigid
