#pragma once

#include <stdexcept>
#include <string>

namespace decimate {

// Bad input: parameters out of range, malformed operators, unknown flags.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure could not deliver its contract
// (non-convergence, branch realness, pole proximity, asymmetry).
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw validation_error(what);
}

} // namespace decimate
