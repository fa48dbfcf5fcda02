#pragma once

#include <stdexcept>
#include <string>

namespace liftspec {

// Base of every error raised by the library. The CLI maps subclasses to exit
// codes: validation problems -> 1, numerical failures -> 2, I/O -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DimensionTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotHermitian : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotSelfAdjoint : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class OddGroundSet : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptySet : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DepthTooLarge : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  ParseError(const std::string& what, int line, std::string field)
      : ValidationError(what), line_(line), field_(std::move(field)) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

class SingularMatrix : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularShift : public NumericalError {
 public:
  SingularShift(const std::string& what, int index)
      : NumericalError(what), index_(index) {}
  // 0-based generator index whose shift lambda^2 - a_{i*} a_i is singular.
  int index() const { return index_; }

 private:
  int index_;
};

class SingularResolvent : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularIteration : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, double residual, int iterations)
      : NumericalError(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace liftspec
