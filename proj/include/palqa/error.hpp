#pragma once

#include <stdexcept>
#include <string>

namespace palqa {

// Malformed input: bad file headers, corrupt payloads, out-of-range fields.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated a documented precondition (bad argument value, size mismatch).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Simulator refused to continue (qubit cap, nondeterministic reset).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace palqa
