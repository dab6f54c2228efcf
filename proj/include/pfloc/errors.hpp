#pragma once

#include <stdexcept>
#include <string>

namespace pfloc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mismatched sequence lengths or array shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (levels, counts, FLOC exponents).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Model that cannot be simulated, e.g. a non-causal periodic AR part.
class ModelError : public Error {
public:
    using Error::Error;
};

/// Sample too short for the requested lag or statistic.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Data with no dispersion where a normalizer is required.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// Linear system that is singular or too ill-conditioned to trust.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

/// Failure of an iterative or regression-based estimator.
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Coefficient estimation failure; names the offending season.
class FitError : public Error {
public:
    FitError(const std::string& what, int season) : Error(what), season_(season) {}
    [[nodiscard]] int season() const noexcept { return season_; }

private:
    int season_;
};

/// CSV reading problems. `row()` is the 1-based line number, 0 if not applicable.
class IngestionError : public Error {
public:
    IngestionError(const std::string& what, std::size_t row) : Error(what), row_(row) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Preprocessing failure; `index()` is the 1-based offending sample.
class PreprocessError : public Error {
public:
    PreprocessError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

}  // namespace pfloc
