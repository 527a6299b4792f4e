#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace singreg {

/// Base class for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or configuration (caller's fault).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Grid too coarse for the requested mollifier width.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, double required_spacing)
      : Error(what), required_spacing_(required_spacing) {}
  double required_spacing() const noexcept { return required_spacing_; }

 private:
  double required_spacing_;
};

/// NaN/Inf found in a sample array.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::size_t index)
      : Error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Parameter combination outside the range where moderateness holds.
class GuardViolation : public Error {
 public:
  using Error::Error;
};

/// Per-node fixed point in the Volterra march did not converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::size_t node, double residual)
      : Error(what), node_(node), residual_(residual) {}
  std::size_t node() const noexcept { return node_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t node_;
  double residual_;
};

/// Solution exceeded the overflow guard.
class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace singreg
