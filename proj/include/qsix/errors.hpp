// Error hierarchy. Every failure a numerical routine can report is one of
// these; the CLI maps them onto exit codes.
#pragma once

#include <stdexcept>
#include <string>

namespace qsix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

// Parameters outside the domain of the operation (|q| not in (0,1), a zero
// argument where one is forbidden, an unmet convergence precondition that is
// not a series divergence).
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "DomainError"; }
};

// A factor in a denominator vanished (within pole_eps).
class PoleError : public Error {
 public:
  PoleError(std::string factor, const std::string& detail)
      : Error("pole at factor " + factor + (detail.empty() ? "" : ": " + detail)),
        factor_(std::move(factor)) {}
  explicit PoleError(std::string factor) : PoleError(std::move(factor), "") {}

  const std::string& factor() const noexcept { return factor_; }
  const char* kind() const noexcept override { return "PoleError"; }

 private:
  std::string factor_;
};

// Series or product terms fail to decay.
class NonConvergence : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "NonConvergence"; }
};

// max_terms exhausted before the tail criterion held.
class BudgetExceeded : public NonConvergence {
 public:
  using NonConvergence::NonConvergence;
  const char* kind() const noexcept override { return "BudgetExceeded"; }
};

// The sampler could not satisfy its constraints within max_rejections.
class Unsatisfiable : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "Unsatisfiable"; }
};

}  // namespace qsix
