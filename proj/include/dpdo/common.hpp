#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dpdo {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: mesh mismatch, bad family parameters, shape errors.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A symbol was asked for something it cannot provide (e.g. complex arguments).
class UnsupportedCapability : public Error {
 public:
  using Error::Error;
};

/// Kernel assembly hit a vanishing plus-factor or a non-finite entry.
class AssemblyError : public Error {
 public:
  using Error::Error;
};

/// The reduced system is singular or too ill-conditioned to be trusted.
class NearSingular : public Error {
 public:
  NearSingular(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

/// Iterative norm estimation failed to converge.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Experiment settings are inconsistent (hypotheses violated, bad windows).
class InvalidConfiguration : public Error {
 public:
  using Error::Error;
};

}  // namespace dpdo
