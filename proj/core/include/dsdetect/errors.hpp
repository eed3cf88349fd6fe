#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dsdetect {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input rejected before any computation: bad parameters, bad matrices,
/// out-of-domain arguments. The CLI maps these to exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

class InvalidParam : public ValidationError {
public:
    InvalidParam(std::string name, double value, std::string constraint);

    const std::string& name() const noexcept { return name_; }
    double value() const noexcept { return value_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string name_;
    double value_;
    std::string constraint_;
};

class DomainError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DimensionMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidSpreadingMatrix : public ValidationError {
public:
    InvalidSpreadingMatrix(std::size_t row, std::size_t col, std::string reason);

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Factorization or other numerical breakdown. Maps to exit code 2.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

}  // namespace dsdetect
