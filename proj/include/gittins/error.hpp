#pragma once

#include <stdexcept>
#include <string>

namespace gittins {

/// Input that violates an operation's precondition (bad index, non-stochastic row, tol <= 0, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// epsilon-greedy selection was asked to choose among zero available arms.
class EmptySelection : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An experiment or training configuration that cannot be run as written.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw InvalidInput(what);
}

inline void require_config(bool ok, const std::string& what)
{
    if (!ok) throw ConfigError(what);
}

} // namespace detail
} // namespace gittins
