#ifndef SIWR_ERRORS_H
#define SIWR_ERRORS_H

#include <stdexcept>
#include <string>

namespace siwr
{

/// Input outside the mathematical domain of an operation (negative rates, N = 0, ...).
class DomainError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Base of all failures of an iterative numerical method.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// The adaptive integrator needed a step below SolverConfig::h_min.
class StepSizeUnderflow : public NumericalError
{
public:
    StepSizeUnderflow(double t, double h)
        : NumericalError("step size underflow at t=" + std::to_string(t) + " (h=" + std::to_string(h) + ")")
        , time(t)
        , step(h)
    {
    }

    double time;
    double step;
};

class NonConvergence : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class DegenerateColumn : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class SingularRegression : public NumericalError
{
public:
    using NumericalError::NumericalError;
};

class InvalidRanges : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace siwr

#endif // SIWR_ERRORS_H
