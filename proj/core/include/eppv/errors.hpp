#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eppv {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Array or matrix sizes that do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A model fit could not produce a usable estimate.
class FitError : public Error {
 public:
  using Error::Error;
};

/// The logistic MLE does not exist (fitted probabilities driven to 0 or 1).
class SeparationError : public FitError {
 public:
  using FitError::FitError;
};

/// The design matrix is rank deficient.
class RankError : public FitError {
 public:
  using FitError::FitError;
};

/// Newton iterations hit the cap without meeting the score tolerance.
class ConvergenceError : public FitError {
 public:
  using FitError::FitError;
};

/// More than half of the bootstrap resamples could not be fitted.
class BootstrapUnstable : public FitError {
 public:
  BootstrapUnstable(const std::string& what, std::size_t failed, std::size_t total)
      : FitError(what), failed_(failed), total_(total) {}
  std::size_t failed() const noexcept { return failed_; }
  std::size_t total() const noexcept { return total_; }

 private:
  std::size_t failed_;
  std::size_t total_;
};

/// A response value is impossible under the supplied probability
/// (y = 1 with pi = 0, or y = 0 with pi = 1).
class InconsistentProbability : public Error {
 public:
  InconsistentProbability(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Malformed input data. `row` and `column` are 1-based; 0 means "not applicable".
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
      : Error(what), row_(row), column_(column) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class EmptyFile : public DataError {
 public:
  using DataError::DataError;
};

class MissingColumn : public DataError {
 public:
  using DataError::DataError;
};

class NonNumericCell : public DataError {
 public:
  using DataError::DataError;
};

class NonBinaryResponse : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace eppv
