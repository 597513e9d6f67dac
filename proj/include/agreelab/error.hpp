#pragma once

#include <stdexcept>
#include <string>

namespace agreelab {

// Base for every error the library raises on a violated precondition.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a simulated output leaves the divergence envelope.
class DivergenceError : public Error {
 public:
  DivergenceError(double time, const std::string& what)
      : Error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Raised when a filter design box contains no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace agreelab
