#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tadpole {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A profile or state whose branch constraints do not hold.
class InvalidStateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters for which no admissible single-lobe kink state exists.
/// Carries the case-table label that rules the configuration out.
class InadmissibleError : public std::runtime_error {
 public:
  InadmissibleError(const std::string& what, std::string case_label)
      : std::runtime_error(what), case_label_(std::move(case_label)) {}
  const std::string& case_label() const noexcept { return case_label_; }

 private:
  std::string case_label_;
};

/// Iterative method failed (no convergence, breakdown, non-finite values).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (e.g. CFL bound, Morse index).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Grid and data sizes do not agree.
class DimensionError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace tadpole
