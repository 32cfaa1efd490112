#pragma once

#include <stdexcept>
#include <string>

namespace dlab {

// Base of every error raised by the library. The CLI maps ParseError to exit
// status 2 and everything else to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ZeroConstantTerm : public Error {
 public:
  ZeroConstantTerm() : Error("series has zero constant term") {}
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class AlphaOutOfRange : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BetaAboveOne : public PreconditionError {
 public:
  explicit BetaAboveOne(double beta)
      : PreconditionError("phi_beta is defined only for beta <= 1, got " +
                          std::to_string(beta)) {}
};

class BasisTooLarge : public Error {
 public:
  using Error::Error;
};

class NumericallySingular : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dlab
