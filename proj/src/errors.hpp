#ifndef UAVPLAN_ERRORS_HPP
#define UAVPLAN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace uavplan {

// Malformed input file (syntax, wrong type, unknown key).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a model invariant.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A requested state (trajectory, initialization) cannot satisfy the
// feasibility constraints.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace uavplan

#endif
