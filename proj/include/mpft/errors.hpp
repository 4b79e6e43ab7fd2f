#pragma once

#include <stdexcept>
#include <string>

namespace mpft {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input or output where a finite value is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration or out-of-contract parameter.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Geometric input with insufficient rank (identical or collinear points).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Requested operation is not available for this problem or dimension.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given input (e.g. sparsity of one point).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpft
