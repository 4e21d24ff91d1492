#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lrcert {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Vector or matrix dimensions do not agree with a network or environment.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside its admissible domain (empty logits, NaN, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

class InvalidActionError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter makes a closed-form expression undefined.
class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

// Not enough admissible samples to form an estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// Trajectory data does not follow the layout an operation requires.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// The requested confidence cannot be reached for any number of trajectories.
class InfeasibleConfigError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

// Simulation produced a non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::vector<double> state)
      : Error(what), state_(std::move(state)) {}

  const std::vector<double>& state() const noexcept { return state_; }

 private:
  std::vector<double> state_;
};

}  // namespace lrcert
