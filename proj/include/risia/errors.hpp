#pragma once

#include <stdexcept>
#include <string>

namespace risia {

// Instance cannot be evaluated (e.g. a reference SNR of zero); the caller
// should regenerate channels rather than retry the same input.
class DegenerateInstanceError : public std::runtime_error {
public:
    explicit DegenerateInstanceError(const std::string& what) : std::runtime_error(what) {}
};

// File could not be opened, read, written, or parsed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace risia
