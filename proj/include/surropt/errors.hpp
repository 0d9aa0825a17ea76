#pragma once

#include <stdexcept>
#include <string>

namespace surropt {

// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Experiment configuration is malformed; message carries the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input data (series files, trace files) is malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure failed (singular system, divergent training, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Every lattice point has already been evaluated; no proposal possible.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace surropt
