#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace goaltime {

// Bad input data: malformed CSV, degenerate counts, a model that cannot be
// fitted to the supplied counts.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// DataError raised while reading a CSV stream; line is 1-based.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A numerical routine failed to converge or produced a non-finite value.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace goaltime
