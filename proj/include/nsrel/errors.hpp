/// @file errors.hpp
/// @brief Exception types shared by every nsrel module.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsrel {

/// Shape or grid mismatch between operands, missing record columns, malformed input.
class StructuralError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Argument outside the mathematical domain of an operation (negative density, p < 1, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Korn ratio requested for a field whose stress norm (and weight term) vanishes.
class DegenerateFieldError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Test pair violates positivity, integrability or boundary compatibility.
class AdmissibilityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Stable time step underflowed; carries the offending cell.
class TimeStepCollapseError : public std::runtime_error {
public:
  TimeStepCollapseError(const std::string& what, std::size_t cell)
      : std::runtime_error(what), cell_(cell) {}
  std::size_t cell() const noexcept { return cell_; }

private:
  std::size_t cell_;
};

/// Non-finite value produced by the integrator; carries the simulation time.
class DivergenceError : public std::runtime_error {
public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

private:
  double time_;
};

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsrel
