#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace drorder {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid constructor arguments (non-unit normal, empty box, bad radius, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Operand is not monotone where the contract requires it, including a
// matrix whose symmetric part fails the PSD test.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

// Structural precondition violated (non-affine operand, A not an
// affine-subspace normal cone, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class CertificateError : public Error {
public:
    CertificateError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Non-finite iterate; carries the last finite state.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, Eigen::VectorXd last_finite, std::size_t step)
        : Error(what), last_finite_(std::move(last_finite)), step_(step) {}
    const Eigen::VectorXd& last_finite() const noexcept { return last_finite_; }
    std::size_t step() const noexcept { return step_; }

private:
    Eigen::VectorXd last_finite_;
    std::size_t step_;
};

// Iteration budget exhausted before the fixed-point residual met tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, Eigen::VectorXd best, double residual)
        : Error(what), best_(std::move(best)), residual_(residual) {}
    const Eigen::VectorXd& best() const noexcept { return best_; }
    double residual() const noexcept { return residual_; }

private:
    Eigen::VectorXd best_;
    double residual_;
};

} // namespace drorder
