#pragma once

#include <stdexcept>
#include <string>

namespace impulse {

struct QuadratureFailure : std::runtime_error {
    explicit QuadratureFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateBand : std::runtime_error {
    explicit DegenerateBand(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoBracket : std::runtime_error {
    explicit NoBracket(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceFailure : std::runtime_error {
    explicit ConvergenceFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidConfig : std::runtime_error {
    explicit InvalidConfig(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a result contradicts a structural guarantee of the model
// (e.g. the regime classifier observing an impossible band pair).
struct InternalCheckFailure : std::logic_error {
    explicit InternalCheckFailure(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace impulse
