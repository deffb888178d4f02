#pragma once

#include <stdexcept>

namespace parcelfuse {

// Unrecoverable problem in an input data file: broken syntax, missing
// required header, dangling reference. Carries a human-readable message
// with a position where one is available.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Problem with the run configuration or command usage, as opposed to the
// data being processed.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace parcelfuse
