// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The qlos Authors

#pragma once

#include <stdexcept>
#include <string>

namespace qlos {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (unsupported sizes, bad keys, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Quantizer family not supported by the requested operation.
class UnsupportedFamilyError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Vector or bit-sequence length does not match what the operation expects.
class InputShapeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite sample or otherwise unusable input value.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Interval or cell carries (numerically) zero probability.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration is infeasible and no Monte Carlo fallback was allowed.
class CapacityEstimationError : public Error {
 public:
  using Error::Error;
};

/// An iterative or adaptive numerical method missed its accuracy target.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}

  /// Error estimate (or last update size) reached before giving up.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace qlos
