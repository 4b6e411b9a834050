#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace decstab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Time-varying system/measure callbacks.
using MatrixFn = std::function<Matrix(double)>;
using ScalarFn = std::function<double(double)>;

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched or non-square matrix shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain (non-positive weights, bad step, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A plant violates one of the standing rank / relative-degree assumptions.
class AssumptionError : public Error {
 public:
  using Error::Error;
};

/// The diagonal-dominance certificate required by a synthesis step is absent.
class CertificateError : public Error {
 public:
  using Error::Error;
};

/// A gain schedule dips below its per-channel floor after the activation time.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// Malformed plant/schedule file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver failure, residual out of tolerance, or an internal consistency
/// check tripped by numerical noise.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Simulated state left the representable range.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, double time)
      : NumericalError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// Not enough usable samples for a decay fit.
class FitError : public Error {
 public:
  using Error::Error;
};

}  // namespace decstab
