#pragma once

#include <stdexcept>
#include <string>

namespace flbench {

/// Map text rejected: ragged rows, bad character, start/goal count violations.
struct MalformedMap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Transition model queried at a Hole or Goal state.
struct TerminalStateQuery : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// step() called after the episode already ended (terminal or truncated).
struct SteppedAfterEpisodeEnd : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// UCT inputs with n_sa > n_s.
struct InvalidCounts : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Value iteration hit its sweep cap before reaching the tolerance.
struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid benchmark/CLI configuration (exit code 2 at the CLI).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace flbench
