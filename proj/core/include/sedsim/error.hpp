#pragma once

#include <stdexcept>
#include <string>

namespace sedsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// All sampled frequencies coincide, so no frequency gap exists.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// A sampling grid has too few points along some axis.
class GridDegeneracy : public Error {
 public:
  using Error::Error;
};

/// The adaptive integrator could not find an acceptable step.
class StiffnessError : public Error {
 public:
  using Error::Error;
};

/// The integrated state became NaN or infinite.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sedsim
