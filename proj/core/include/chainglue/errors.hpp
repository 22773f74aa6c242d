#ifndef CHAINGLUE_ERRORS_HPP
#define CHAINGLUE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chainglue {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model violates a rate-matrix or labelling invariant.
class InvalidModel : public Error {
 public:
  using Error::Error;
};

class ReducibleChain : public Error {
 public:
  using Error::Error;
};

/// A dense solve hit a (numerically) zero pivot.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// The column-zeroed excursion matrix is rank deficient. Cannot happen for an
/// irreducible chain, so this points at corrupted input.
class SingularQ0 : public SingularSystem {
 public:
  using SingularSystem::SingularSystem;
};

/// A computed probability left [0, 1] by more than the clamp tolerance.
class NumericalDrift : public Error {
 public:
  using Error::Error;
};

class InvalidGlueSpec : public Error {
 public:
  using Error::Error;
};

class ConditionAViolated : public Error {
 public:
  using Error::Error;
};

class DegenerateIntensities : public Error {
 public:
  using Error::Error;
};

/// Closed-form weights requested while the stationary vectors are parallel.
class ParallelCase : public Error {
 public:
  using Error::Error;
};

/// An excursion exceeded the jump watchdog during simulation.
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace chainglue

#endif  // CHAINGLUE_ERRORS_HPP
