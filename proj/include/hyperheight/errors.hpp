#pragma once

#include <stdexcept>
#include <string>

namespace hyperheight {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-domain input (bad curve, bad divisor, bad file).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A numerical quantity came out too close to a degenerate value.
class NumericalDegeneracy : public Error {
 public:
  using Error::Error;
};

// Requested accuracy could not be reached within the allowed budget.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// Integer factorization ran out of its time budget.
class FactorizationBudgetExceeded : public Error {
 public:
  FactorizationBudgetExceeded(const std::string& what, std::string partial, std::string cofactor)
      : Error(what), partial_(std::move(partial)), cofactor_(std::move(cofactor)) {}
  const std::string& partial() const { return partial_; }
  const std::string& cofactor() const { return cofactor_; }

 private:
  std::string partial_;
  std::string cofactor_;
};

// A local intersection needs regular-model data that was not supplied.
class ReductionDataRequired : public Error {
 public:
  ReductionDataRequired(const std::string& what, std::string prime)
      : Error(what), prime_(std::move(prime)) {}
  const std::string& prime() const { return prime_; }

 private:
  std::string prime_;
};

}  // namespace hyperheight
