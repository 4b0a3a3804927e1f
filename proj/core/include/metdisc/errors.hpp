#pragma once

#include <stdexcept>
#include <string>

namespace metdisc {

// Root of the library's exception hierarchy. Each subclass corresponds to one
// failure category named in the public contracts.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point does not belong to the space it is used with.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Unknown names, missing optional data, inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed numeric input (negative weights, non-monotone CDFs, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

// Quadrature failure or non-integrable density.
class NumericError : public Error {
 public:
  using Error::Error;
};

class SamplerError : public Error {
 public:
  using Error::Error;
};

// A verification was requested whose hypotheses do not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The measured sdm(xi_natural)/chordal ratio is not constant across pairs.
class ProportionalityError : public Error {
 public:
  using Error::Error;
};

}  // namespace metdisc
