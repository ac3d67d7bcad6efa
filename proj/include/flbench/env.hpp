#pragma once

#include <memory>
#include <random>
#include <string_view>
#include <vector>

#include "flbench/errors.hpp"

namespace flbench {

/// Row-major cell index into a GridMap.
using StateId = int;

enum class Cell : char { Start, Frozen, Hole, Goal };

/// The four grid moves, numbered as in the classic FrozenLake environment.
enum class Action : int { Left = 0, Down = 1, Right = 2, Up = 3 };

inline constexpr int kNumActions = 4;

constexpr int action_index(Action a) { return static_cast<int>(a); }
constexpr Action action_from_index(int i) { return static_cast<Action>(i); }

/// Immutable rectangular grid of cells. Exactly one Start, at least one Goal.
class GridMap {
public:
    GridMap(int rows, int cols, std::vector<Cell> cells);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int n_states() const { return rows_ * cols_; }
    Cell cell(StateId s) const { return cells_[static_cast<std::size_t>(s)]; }
    StateId start_state() const { return start_; }
    bool is_goal(StateId s) const { return cell(s) == Cell::Goal; }
    bool is_terminal(StateId s) const {
        const Cell c = cell(s);
        return c == Cell::Hole || c == Cell::Goal;
    }

private:
    int rows_;
    int cols_;
    std::vector<Cell> cells_;
    StateId start_;
};

/// Parses an S/F/H/G map, one row per line (LF or CRLF). Throws MalformedMap.
GridMap parse_map(std::string_view text);

/// Canonical 4x4 and 8x8 layouts of the environment family.
extern const std::string_view kMap4x4;
extern const std::string_view kMap8x8;

/// Default per-episode step budget: 25 steps per grid row (100 on the 4x4 map).
int default_step_cap(const GridMap& map);

struct EnvConfig {
    GridMap map;
    bool slippery = true;
    int step_cap = 0;  // >= 1
};

struct StepOutcome {
    StateId next_state;
    double reward;   // 1.0 iff next_state is a Goal cell
    bool terminal;   // next_state is Goal or Hole
    bool truncated;  // step cap reached on a non-terminal state
};

struct TransitionEntry {
    StateId next;
    double prob;
};

/// Exact next-state distribution for a non-terminal (s, a). Slippery dynamics
/// fire the intended move and its two perpendiculars with probability 1/3
/// each; a move off the grid stays in place. Entries with the same next state
/// are merged, intended direction listed first. Throws TerminalStateQuery.
std::vector<TransitionEntry> transition_distribution(const GridMap& map, bool slippery,
                                                     StateId s, Action a);

/// Single-agent episodic environment. Mutable state is the current cell and
/// step counter; the transition model is immutable and shared between copies,
/// so cloning for simulation rollouts is cheap.
class FrozenLakeEnv {
public:
    explicit FrozenLakeEnv(EnvConfig cfg);

    /// Back to the Start cell, step counter zeroed. Idempotent.
    StateId reset();

    /// Samples the next state from transition_distribution using draws from
    /// rng only. Throws SteppedAfterEpisodeEnd once terminal or truncated.
    StepOutcome step(Action a, std::mt19937_64& rng);

    /// Copy that starts from the current state with a fresh step counter and
    /// the given step budget. Used for rollout simulations.
    FrozenLakeEnv simulation_copy(int step_cap) const;

    const GridMap& map() const;
    bool slippery() const;
    int step_cap() const { return step_cap_; }
    StateId state() const { return state_; }
    int steps_taken() const { return steps_; }
    bool episode_over() const { return terminal_ || truncated_; }

private:
    struct Model;

    std::shared_ptr<const Model> model_;
    int step_cap_;
    StateId state_;
    int steps_ = 0;
    bool terminal_ = false;
    bool truncated_ = false;
};

}  // namespace flbench
