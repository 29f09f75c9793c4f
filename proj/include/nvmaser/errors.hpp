#pragma once

#include <stdexcept>
#include <string>

namespace nvmaser {

// Raised when a caller violates a precondition (bad value, malformed file,
// unknown configuration key). Maps to CLI exit code 1.
class invalid_input_error : public std::runtime_error {
public:
    explicit invalid_input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when inputs are well formed but the requested result does not exist
// (no root in bracket, degenerate circle, no inversion). Maps to CLI exit code 2.
class computation_error : public std::runtime_error {
public:
    explicit computation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nvmaser
