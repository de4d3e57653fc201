#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cubeproto {

// Invalid argument or configuration supplied by the caller.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed input data (ragged rows, unparseable cells).
class IngestError : public std::runtime_error {
public:
    IngestError(const std::string& what, std::size_t row, std::size_t column = npos)
        : std::runtime_error(what), row_(row), column_(column) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

// Header does not agree with the declared schema.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Too many fractional units left for exhaustive landing.
class LandingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cubeproto
