#pragma once

#include <stdexcept>
#include <string>

namespace busyq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the domain of the model (e.g. alpha <= 0).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (distribution spec strings, CSV tables, table ids).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An integral or moment is formally infinite. `order()` is the offending
/// moment order when known, otherwise 0.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int order) : Error(what), order_(order) {}
  int order() const noexcept { return order_; }

 private:
  int order_;
};

/// Requested accuracy not reached; carries the best estimate obtained.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double est_error)
      : Error(what), best_estimate_(best_estimate), est_error_(est_error) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double est_error() const noexcept { return est_error_; }

 private:
  double best_estimate_;
  double est_error_;
};

/// Shape statistics requested for a (numerically) degenerate law.
class DegenerateDistributionError : public Error {
 public:
  using Error::Error;
};

}  // namespace busyq
