#pragma once

#include <stdexcept>
#include <string>

namespace ergocert {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simplex exceeded its pivot budget; carries the best primal/dual bounds seen.
class LpError : public Error {
 public:
  LpError(const std::string& what, double lower, double upper)
      : Error(what), lower_bound(lower), upper_bound(upper) {}
  double lower_bound;
  double upper_bound;
};

class ChainError : public Error {
 public:
  using Error::Error;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace ergocert
