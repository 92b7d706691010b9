#pragma once

#include <stdexcept>
#include <string>

namespace deepfactor {

// Base class for all library errors. Precondition violations on arguments
// throw std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Vector/matrix length disagreement.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// CSV/JSON input could not be parsed; message carries the line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Normal-equations matrix is not positive definite at lambda = 0.
class SingularDesignError : public Error {
 public:
  using Error::Error;
};

// Relevance redistribution hit an exactly-zero denominator with a zero
// stabilizer; callers must pass stabilizer > 0.
class ZeroDenominatorError : public Error {
 public:
  using Error::Error;
};

// Walk-forward start month precedes the first month with a full training
// window; carries the first month that would work.
class InsufficientHistoryError : public Error {
 public:
  InsufficientHistoryError(const std::string& what, std::string first_feasible)
      : Error(what), first_feasible_(std::move(first_feasible)) {}
  const std::string& first_feasible() const { return first_feasible_; }

 private:
  std::string first_feasible_;
};

// A descriptor column is constant across the cross-section.
class DegenerateColumnError : public Error {
 public:
  using Error::Error;
};

// Long/short return series has exactly zero volatility; Sharpe undefined.
class ZeroVolatilityError : public Error {
 public:
  using Error::Error;
};

// Attribution mass sums to zero; percentages undefined.
class DegenerateTotalError : public Error {
 public:
  using Error::Error;
};

// Training loss became NaN/Inf.
class NonFiniteLossError : public Error {
 public:
  using Error::Error;
};

}  // namespace deepfactor
