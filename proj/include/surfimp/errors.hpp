#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace surfimp {

/// Base class of every domain error raised by the toolkit. The CLI maps these
/// to exit code 1; argument parsing problems map to 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public Error {
 public:
  EmptyDatasetError() : Error("profile has no valid points") {}
  using Error::Error;
};

class NoElementsError : public Error {
 public:
  using Error::Error;
};

class MustImputeFirstError : public Error {
 public:
  MustImputeFirstError() : Error("profile contains invalid points; impute before filtering") {}
};

class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class NothingToImputeError : public Error {
 public:
  NothingToImputeError() : Error("profile has no invalid points to impute") {}
};

class InvalidStartError : public Error {
 public:
  using Error::Error;
};

/// Raised when an operation is used against state that no longer matches its
/// inputs (e.g. a whitening factor built for other hyperparameters).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InsufficientFeaturesError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

class PartialFillError : public Error {
 public:
  PartialFillError(std::string what, std::vector<std::size_t> remaining)
      : Error(std::move(what)), remaining_(std::move(remaining)) {}
  const std::vector<std::size_t>& remaining() const { return remaining_; }

 private:
  std::vector<std::size_t> remaining_;
};

/// Optimization ended without a usable model. Carries the last finite
/// iterate and the objective history for diagnostics.
class FitFailure : public Error {
 public:
  FitFailure(std::string what, std::vector<double> last_params, std::vector<double> objective)
      : Error(std::move(what)), last_params_(std::move(last_params)), objective_(std::move(objective)) {}
  const std::vector<double>& last_params() const { return last_params_; }
  const std::vector<double>& objective() const { return objective_; }

 private:
  std::vector<double> last_params_;
  std::vector<double> objective_;
};

/// Parse error in a key=value config or CSV file. `line` is 1-based, 0 if unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::string key = {})
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line),
        key_(std::move(key)) {}
  std::size_t line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::size_t line_;
  std::string key_;
};

}  // namespace surfimp
