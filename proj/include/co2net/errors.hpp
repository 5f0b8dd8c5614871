#pragma once

#include <stdexcept>
#include <string>

namespace co2net {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed, missing or out-of-range configuration data.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A model law was evaluated outside its mathematical domain
/// (negative concentration, negative discriminant, ...).
class ModelDomainError : public Error {
public:
    using Error::Error;
};

/// A diagonal entry of the dilution gain matrix fell below the
/// singularity threshold; the control law needs its inverse.
class SingularInputMatrixError : public Error {
public:
    using Error::Error;
};

/// Settling-time bound requested outside the admissible range T_max > 1.
class SettlingBoundError : public Error {
public:
    using Error::Error;
};

/// Fixed-step integration produced a non-finite state.
class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Adaptive oracle step size underflowed (problem too stiff for the
/// explicit embedded pair).
class StiffnessError : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

/// No step size above the floor reproduced the oracle solution.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// step() called on an environment whose episode already ended.
class EpisodeFinishedError : public Error {
public:
    using Error::Error;
};

/// Training produced non-finite returns.
class TrainingAbortError : public Error {
public:
    using Error::Error;
};

/// Compensation volume is undefined for a non-positive uptake flow.
class NoCompensationError : public Error {
public:
    using Error::Error;
};

} // namespace co2net
