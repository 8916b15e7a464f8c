#ifndef NETMORPH_ERRORS_HPP
#define NETMORPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netmorph {

// Malformed documents: bad JSON, schema violations, cyclic graphs.
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched input dimensions, invalid arguments, degenerate geometry.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested accuracy cannot be met within the parameter caps.
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& msg, double min_achievable_delta)
        : std::runtime_error(msg), min_achievable_delta(min_achievable_delta) {}
    double min_achievable_delta;
};

// Operation not available for this input (e.g. D > 2 region enumeration).
class unsupported_error : public std::runtime_error {
public:
    explicit unsupported_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace netmorph

#endif
