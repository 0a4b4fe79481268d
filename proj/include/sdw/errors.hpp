#pragma once

#include <stdexcept>
#include <string>

namespace sdw {

// Common base so callers can catch everything the library throws in one place.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: malformed config, out-of-range parameter, alphabet mismatch.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A certified comparison could not be resolved within the precision budget.
// Never guessed around: callers must treat this as "answer unknown".
class PrecisionError : public Error {
public:
    explicit PrecisionError(const std::string& msg) : Error(msg) {}
};

// An enumeration or generation exceeded its configured resource cap.
class CapError : public Error {
public:
    explicit CapError(const std::string& msg) : Error(msg) {}
};

// A requested construction has no solution at the given scale
// (e.g. no integer in the brick-count bracket, or same-sign root bracket).
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& msg) : Error(msg) {}
};

// A shift's structural metadata (decomposition / gap size) turned out to be
// inconsistent with its language, e.g. no gluing word of the promised length.
class SpecificationError : public Error {
public:
    explicit SpecificationError(const std::string& msg) : Error(msg) {}
};

} // namespace sdw
