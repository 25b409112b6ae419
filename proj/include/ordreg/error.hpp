#pragma once

#include <stdexcept>
#include <string>

namespace ordreg {

// Base for everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or misuse of the public API (CLI exit code 1).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Problems with dataset content, files, or splits (CLI exit code 2).
class DataError : public Error {
public:
    using Error::Error;
};

// A training run went numerically bad (CLI exit code 3).
class TrainingError : public Error {
public:
    using Error::Error;
};

class InvalidScaleError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Class index outside 1..K. Usually means a label in the data is out of range.
class InvalidClassError : public DataError {
public:
    using DataError::DataError;
};

class CompatibilityError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Model output cannot be decoded (e.g. zero norm under the dot-product rule).
class DegenerateOutputError : public TrainingError {
public:
    using TrainingError::TrainingError;
};

// Chance agreement is 1: kappa has no value for this confusion matrix.
class UndefinedKappaError : public DataError {
public:
    using DataError::DataError;
};

class ShapeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class SchemaError : public DataError {
public:
    using DataError::DataError;
};

class TrainingDivergedError : public TrainingError {
public:
    using TrainingError::TrainingError;
};

} // namespace ordreg
