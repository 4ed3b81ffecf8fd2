#pragma once

#include <stdexcept>
#include <string>

namespace vsim {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, parameters or input data. Maps to CLI exit code 1.
struct ConfigError : Error {
    using Error::Error;
};

/// Series/grid incompatibility between operands.
struct ShapeError : ConfigError {
    using ConfigError::ConfigError;
};

/// Numerical failure inside a solver. Maps to CLI exit code 2.
struct NumericalError : Error {
    using Error::Error;
};

/// Kernel evaluated to a non-finite value at a quadrature point.
struct EvaluationError : NumericalError {
    EvaluationError(double t, double tau, const std::string& what_)
        : NumericalError("kernel evaluation failed at t=" + std::to_string(t) +
                         ", tau=" + std::to_string(tau) + ": " + what_),
          t_value(t), tau_value(tau) {}
    double t_value;
    double tau_value;
};

/// Zero or near-zero diagonal factor encountered while stepping through nodes.
struct SingularKernelError : NumericalError {
    SingularKernelError(std::size_t node, double magnitude, double threshold)
        : NumericalError("near-singular diagonal kernel at node " + std::to_string(node) +
                         " (|K| = " + std::to_string(magnitude) +
                         " < " + std::to_string(threshold) + ")"),
          node_index(node) {}
    std::size_t node_index;
};

/// Discrepancy bracket does not contain the target residual level.
struct BracketError : NumericalError {
    BracketError(double residual_lo, double residual_hi, double target)
        : NumericalError("alpha bracket too small: residual(alpha_hi) = " +
                         std::to_string(residual_hi) + " still below target " +
                         std::to_string(target) +
                         " (residual(alpha_lo) = " + std::to_string(residual_lo) + ")"),
          at_lo(residual_lo), at_hi(residual_hi) {}
    double at_lo;
    double at_hi;
};

/// Theorem hypothesis violated in a way that makes the check meaningless.
struct HypothesisError : ConfigError {
    using ConfigError::ConfigError;
};

/// File system failure, always carries the offending path.
struct IoError : Error {
    IoError(const std::string& path, const std::string& what_)
        : Error(path + ": " + what_), path_value(path) {}
    std::string path_value;
};

} // namespace vsim
