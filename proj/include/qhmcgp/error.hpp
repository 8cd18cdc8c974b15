#pragma once

#include <stdexcept>
#include <string>

namespace qhmcgp {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: dimension mismatch, non-finite input, out-of-range index.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The kernel matrix could not be factorized even at the largest jitter.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// A Markov chain failed (e.g. it never accepted a proposal).
class ChainFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhmcgp
