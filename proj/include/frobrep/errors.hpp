#ifndef FROBREP_ERRORS_HPP
#define FROBREP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace frobrep {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or out-of-range parameters (ring parameters, axes, orders).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what) : Error("parameter error: " + what) {}
};

/// Mathematically ill-defined request (e.g. substitution with a non-nilpotent constant).
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain error: " + what) {}
};

/// Input exceeds the configured dimension bound or the supported parameter range.
class ScopeError : public Error {
 public:
  explicit ScopeError(const std::string& what) : Error("scope error: " + what) {}
};

/// An object lacks a capability needed by the operation (e.g. no functorial group action).
class CapabilityError : public Error {
 public:
  explicit CapabilityError(const std::string& what) : Error("capability error: " + what) {}
};

/// An internal invariant failed; indicates a bug rather than bad input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal error: " + what) {}
};

/// The request lies outside the hypotheses under which the socle description holds
/// (characteristic 2 with a weight whose mod-p reduction is neither 0 nor fundamental).
class OutsideHypothesesError : public Error {
 public:
  explicit OutsideHypothesesError(const std::string& what)
      : Error("outside hypotheses: " + what) {}
};

}  // namespace frobrep

#endif  // FROBREP_ERRORS_HPP
