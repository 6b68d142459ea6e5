#pragma once

#include <stdexcept>
#include <string>

namespace frh {

// Base class for every numeric-domain failure raised by the library.
// The CLI maps these to exit code 3; everything else is a plain bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A series/quadrature did not reach its internal tolerance within the
// configured maximum effort. Signals a parameter regime outside the
// validated envelope rather than a transient condition.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// Arguments outside the mathematical scope of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sign-scan found a sign-preserving dip below the scan tolerance: a
// tangential (double) zero cannot be bracketed and must not be skipped
// silently.
class TangentialZeroSuspected : public Error {
 public:
  using Error::Error;
};

// refine_root was handed an interval without a strict sign change.
class BadBracket : public Error {
 public:
  using Error::Error;
};

// diff_central step shrank below the round-off floor.
class StepUnderflow : public Error {
 public:
  using Error::Error;
};

// Phase-path refinement hit the minimum step without resolving a jump;
// indicates a near-tangential zero of the angle denominator.
class UnwrapAmbiguity : public Error {
 public:
  using Error::Error;
};

// Bisection predicate is constant over the initial interval.
class PredicateNotBracketed : public Error {
 public:
  using Error::Error;
};

// No amplitude minimum up to t_max; raise t_max or accept monotone decay.
class NoLocalMinimum : public Error {
 public:
  using Error::Error;
};

// The closed-form coefficient recurrence disagreed with the exact
// trigonometric-iteration oracle beyond tolerance.
class OracleMismatch : public Error {
 public:
  using Error::Error;
};

// Tail diagnostics of a coefficient sequence did not settle, so no radius
// of convergence can be reported.
class NotConverged : public Error {
 public:
  using Error::Error;
};

// Series evaluation requested at or beyond the estimated radius of
// convergence (finite-time breakdown regime).
class OutsideRadius : public Error {
 public:
  OutsideRadius(const std::string& msg, double radius)
      : Error(msg), radius_(radius) {}
  double radius() const { return radius_; }

 private:
  double radius_;
};

}  // namespace frh
