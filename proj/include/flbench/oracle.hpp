#pragma once

#include <random>
#include <string>
#include <vector>

#include "flbench/env.hpp"

namespace flbench {

/// Exact finite MDP extracted from a GridMap: per-(s, a) transition lists for
/// non-terminal states, entry rewards and terminal flags per state.
struct Mdp {
    int n_states = 0;
    int n_actions = kNumActions;
    StateId start_state = 0;
    std::vector<std::vector<TransitionEntry>> transitions;  // n_states * n_actions, empty rows for terminal states
    std::vector<double> terminal_reward;                    // 1.0 on Goal cells
    std::vector<bool> terminal_mask;

    const std::vector<TransitionEntry>& at(StateId s, Action a) const {
        return transitions[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_actions) +
                           static_cast<std::size_t>(action_index(a))];
    }
};

/// Builds the exact model by direct enumeration of the slip rule (independent
/// of transition_distribution; the two are cross-checked in tests). Entries
/// are sorted by next state.
Mdp build_mdp(const GridMap& map, bool slippery);

struct ValueFunction {
    std::vector<double> values;  // per state, terminal states at 0
};

struct PolicyVector {
    std::vector<Action> actions;  // meaningful for non-terminal states
};

struct ValueIterationResult {
    ValueFunction values;
    PolicyVector policy;            // greedy w.r.t. values, lowest index wins ties
    std::vector<double> residuals;  // sup-norm change per sweep
    int sweeps = 0;
};

/// Jacobi value iteration to sup-norm residual < tol. Requires gamma < 1;
/// throws NonConvergence once max_sweeps is exhausted.
ValueIterationResult value_iteration(const Mdp& mdp, double gamma, double tol,
                                     int max_sweeps = 1000000);

/// Exact probability of reaching a Goal state from Start within `horizon`
/// steps under `policy`, by backward dynamic programming over time.
double finite_horizon_success(const Mdp& mdp, const PolicyVector& policy, int horizon);

/// Monte Carlo estimate of the same quantity with horizon = env step cap.
double evaluate_policy_empirically(FrozenLakeEnv& env, const PolicyVector& policy,
                                   long episodes, std::mt19937_64& rng);

/// Console renderings for the oracle CLI.
std::string render_values(const GridMap& map, const ValueFunction& values);
std::string render_policy(const GridMap& map, const PolicyVector& policy);

/// CSV dump, columns state,value,action (action blank for terminal states).
std::string oracle_csv(const GridMap& map, const ValueFunction& values,
                       const PolicyVector& policy);

}  // namespace flbench
