#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace talbot {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument sits on a pole, a branch cut, or outside an operation's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The closed-form parameter map has a vanishing denominator.
class SingularConfiguration : public Error {
public:
    SingularConfiguration(const std::string& what, double shape, double c)
        : Error(what), shape_(shape), c_(c) {}

    double shape() const noexcept { return shape_; }
    double c() const noexcept { return c_; }

private:
    double shape_;
    double c_;
};

/// An iterative solver hit its iteration cap.
class NoConvergence : public Error {
public:
    using Error::Error;
};

/// An iterate left the admissible region (saddle strip, bracket, window).
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// Evaluation of the transform failed at one quadrature node.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, int node, std::complex<double> z)
        : Error(what), node_(node), z_(z) {}

    int node() const noexcept { return node_; }
    std::complex<double> z() const noexcept { return z_; }

private:
    int node_;
    std::complex<double> z_;
};

/// The error curve handed to N* detection never turns upward.
class NoTurnDetected : public Error {
public:
    using Error::Error;
};

/// Two independent reference computations disagree.
class CertificationError : public Error {
public:
    using Error::Error;
};

}  // namespace talbot
