#pragma once

#include <stdexcept>
#include <string>

namespace ksv {

// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed model or data file. The message carries the location
// (file, context label, row) of the offending construct.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ksv
