#pragma once

#include <stdexcept>
#include <string>

namespace bfdr {

/// Input contains NaN or infinite scores.
struct InvalidScore : std::invalid_argument {
    explicit InvalidScore(const std::string& what) : std::invalid_argument(what) {}
};

/// Tied scores encountered while tie_policy = reject_input.
struct TiesError : std::invalid_argument {
    explicit TiesError(const std::string& what) : std::invalid_argument(what) {}
};

/// A tuning parameter is out of its admissible range.
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation was called outside its stated precondition.
struct PreconditionError : std::logic_error {
    explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

/// Unrecognized procedure name.
struct UnknownMethod : std::invalid_argument {
    explicit UnknownMethod(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace bfdr
