#pragma once

#include <stdexcept>
#include <string>

namespace ordeal {

/// Argument outside the unit square or another documented domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid parameter combination (bad epsilon/k, cutoff <= b_out, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The density is below the floor where a ratio needs it.
class DensityFloorError : public std::runtime_error {
public:
    DensityFloorError(double a, double b)
        : std::runtime_error("density below floor at (" + std::to_string(a) + ", " +
                             std::to_string(b) + ")"),
          a_(a), b_(b) {}
    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }

private:
    double a_;
    double b_;
};

/// A (boundary, utility) pair or a mechanism that cannot be implemented.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mechanism where one good is never chosen.
class DegenerateMechanismError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver ran out of iterations.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file or scenario; message names the offending field.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ordeal
