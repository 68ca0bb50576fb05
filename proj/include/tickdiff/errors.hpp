// errors.hpp: typed failures shared by every tickdiff module.
//
// Each error carries the process exit code the CLI reports for it:
// 2 config/parameter, 3 data, 4 numerical degeneracy.
#pragma once

#include <stdexcept>
#include <string>

namespace tickdiff {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 3; }
};

/// Invalid model or estimator parameter (alpha1 >= 1, delta <= 0, ...).
class ParameterError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

class ConfigError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
};

/// Too few observations for the requested computation.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// Input file header or columns do not match the schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Too many unparseable rows in an input file.
class MalformedDataError : public Error {
public:
    using Error::Error;
};

/// Instrument sets do not line up between panel windows.
class KeyingError : public Error {
public:
    using Error::Error;
};

/// An internal invariant broke (e.g. permutation length vs bin counts).
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Zero variance, constant series, tied tails: the statistic is undefined.
class DegenerateError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

} // namespace tickdiff
