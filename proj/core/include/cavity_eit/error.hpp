#pragma once

#include <stdexcept>
#include <string>

namespace cavity_eit {

// Non-physical or malformed input. `field()` names the offending quantity.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Base for failures of the numerics on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateDenominatorError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedPhaseError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedDelayError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StepSizeError : public NumericalError {
public:
    StepSizeError(const std::string& what, double max_dt)
        : NumericalError(what), max_dt_(max_dt) {}

    double max_dt() const noexcept { return max_dt_; }

private:
    double max_dt_;
};

}  // namespace cavity_eit
