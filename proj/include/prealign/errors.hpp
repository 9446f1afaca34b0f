#pragma once

#include <stdexcept>
#include <string>

namespace prealign {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidSpecies : public Error {
 public:
  using Error::Error;
};

/// Bad argument to a physics routine (quantum numbers, non-positive scales...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Population leaked into the top shells of a truncated rotational basis.
class TruncationLeak : public Error {
 public:
  TruncationLeak(const std::string& what, double leaked)
      : Error(what), leaked_population(leaked) {}
  double leaked_population;
};

/// Classical rotor with zero angular velocity; the time average is undefined.
class DegenerateRotor : public Error {
 public:
  using Error::Error;
};

/// No non-empty oscillation interval for the given field coefficients.
class InadmissibleState : public Error {
 public:
  using Error::Error;
};

/// Quadrature, root finding or ODE integration failed to converge.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace prealign
