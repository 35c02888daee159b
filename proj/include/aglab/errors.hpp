#pragma once

#include <stdexcept>
#include <string>

namespace aglab {

// Every failure mode the library reports has a named type so callers (and
// the CLI's exit-code map) can dispatch on it instead of parsing messages.

struct UnknownAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedSyntax : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationOverBudget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownTask : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ActionOutOfGrammar : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyCandidateSet : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SupportMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonFiniteValue : std::runtime_error {
    NonFiniteValue(const std::string& what, int iteration)
        : std::runtime_error(what), iteration(iteration) {}
    int iteration = 0;
};

struct InsufficientTasks : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace aglab
