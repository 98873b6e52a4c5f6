#pragma once

#include <stdexcept>
#include <string>

namespace bnsl {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (CSV, network text).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An on-disk stream violated its ordering or presence contract.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// Failed read, write, rename or removal.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bnsl
