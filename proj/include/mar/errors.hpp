#pragma once

#include <stdexcept>
#include <string>

namespace mar {

// Base class for everything thrown by the engine.
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration problems: bad parameter values, malformed run configs.
struct ConfigError : EngineError {
    using EngineError::EngineError;
};

// Data problems: parse failures, validation failures, missing coverage.
struct DataError : EngineError {
    using EngineError::EngineError;
};

struct ParseError : DataError {
    using DataError::DataError;
};

struct ValidationError : DataError {
    using DataError::DataError;
};

struct InsufficientDataError : DataError {
    using DataError::DataError;
};

struct NoOverlapError : DataError {
    using DataError::DataError;
};

struct InvalidCalendarError : DataError {
    using DataError::DataError;
};

// Numerical problems: degenerate denominators, singular systems,
// failed iterations.
struct NumericError : EngineError {
    using EngineError::EngineError;
};

struct InvalidInputError : NumericError {
    using NumericError::NumericError;
};

struct DegenerateRiskError : NumericError {
    using NumericError::NumericError;
};

struct DegenerateBetaError : NumericError {
    using NumericError::NumericError;
};

struct DegenerateDownsideError : NumericError {
    using NumericError::NumericError;
};

struct DegenerateTrackingError : NumericError {
    using NumericError::NumericError;
};

struct DegenerateBenchmarkError : NumericError {
    using NumericError::NumericError;
};

struct DegeneratePortfolioError : NumericError {
    using NumericError::NumericError;
};

struct InvalidRegimeError : NumericError {
    using NumericError::NumericError;
};

struct SingularMatrixError : NumericError {
    using NumericError::NumericError;
};

struct NoTangencyError : NumericError {
    using NumericError::NumericError;
};

struct InvalidCovarianceError : NumericError {
    using NumericError::NumericError;
};

struct ConvergenceFailureError : NumericError {
    using NumericError::NumericError;
};

struct NumericalFailureError : NumericError {
    using NumericError::NumericError;
};

}  // namespace mar
