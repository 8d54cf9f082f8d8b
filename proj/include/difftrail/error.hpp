#pragma once

#include <stdexcept>
#include <string>

namespace difftrail {

// Bad argument or configuration value.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A caller broke an operation's precondition (e.g. an impossible AND transition).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Input would make an exhaustive computation too expensive.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file content. The message names the offending line or column.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace difftrail
