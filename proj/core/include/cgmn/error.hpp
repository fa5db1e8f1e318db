#pragma once

#include <stdexcept>
#include <string>

namespace cgmn {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete category onto its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration: unknown key, out-of-range value, violated precondition
// on a config field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or invariant-violating input data.
class DataError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened for reading or writing.
class IoError : public Error {
 public:
  using Error::Error;
};

// Shape mismatch between operands.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced by a forward op, or a zero-norm vector where a direction
// is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Zero-norm row handed to a normalization or cosine.
class DegenerateError : public NumericError {
 public:
  DegenerateError(const std::string& what, std::size_t row)
      : NumericError(what), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Training loss became non-finite.
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, std::size_t epoch, std::size_t batch)
      : NumericError(what), epoch_(epoch), batch_(batch) {}
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

// Exact GED requested beyond the configured node limit.
class IntractableError : public Error {
 public:
  using Error::Error;
};

}  // namespace cgmn
