#pragma once

#include <stdexcept>
#include <string>

namespace chaos {

// Malformed input: shapes, ranges, partition strings, JSON schemas.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A computation produced a non-finite value or could not proceed.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chaos
