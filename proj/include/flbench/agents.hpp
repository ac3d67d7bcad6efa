#pragma once

#include <chrono>
#include <random>
#include <vector>

#include "flbench/env.hpp"
#include "flbench/search.hpp"

namespace flbench {

struct EpisodeRecord {
    long episode_index = 0;
    double episode_return = 0.0;  // in {0, 1}
    int steps = 0;
    bool success = false;  // episode_return == 1
    std::chrono::duration<double> wall_time{0.0};
};

struct QLearnConfig {
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    long epsilon_decay_episodes = 50000;
};

/// Linear anneal from epsilon_start to epsilon_end over the first
/// epsilon_decay_episodes episodes, held constant afterwards.
double epsilon_at(const QLearnConfig& cfg, long episode_index);

struct PolicyMctsConfig {
    int simulations_per_move = 100;  // divisible by kNumActions
    int rollout_horizon = 0;         // 0: use the env step cap
};

/// Plain per-(state, action) value table for Q-Learning, zero-initialized.
class QTable {
public:
    explicit QTable(int n_states);

    int n_states() const { return n_states_; }
    double q(StateId s, Action a) const { return v_[flat(s, a)]; }
    double& q(StateId s, Action a) { return v_[flat(s, a)]; }
    double max_q(StateId s) const;

private:
    std::size_t flat(StateId s, Action a) const {
        return static_cast<std::size_t>(s) * kNumActions + static_cast<std::size_t>(action_index(a));
    }

    int n_states_;
    std::vector<double> v_;
};

/// With probability epsilon a uniform random action, otherwise the argmax of
/// q(s, .) with ties broken uniformly at random.
Action epsilon_greedy_action(const QTable& qtable, StateId s, double epsilon,
                             std::mt19937_64& rng);

/// One episode of the table-based UCT search: reset, repeatedly select an
/// action by UCT and step, then backpropagate the terminal 0/1 return along
/// the whole visited path. Tables persist across episodes.
EpisodeRecord run_episode_optimized_mcts(FrozenLakeEnv& env, QNTables& tables,
                                         const SearchConfig& cfg, std::mt19937_64& rng,
                                         long episode_index = 0);

/// One episode of tabular Q-Learning with epsilon-greedy exploration. The
/// bootstrap term max_a' Q(s',a') is forced to zero when s' is terminal or
/// the episode truncates.
EpisodeRecord run_episode_qlearning(FrozenLakeEnv& env, QTable& qtable,
                                    const QLearnConfig& cfg, std::mt19937_64& rng,
                                    long episode_index);

/// Runs simulations_per_move rollouts from env's current state, split evenly
/// over the four first actions (uniform-random continuation, horizon-capped),
/// folding each 0/1 return into stats. The real environment is not touched.
void run_rollout_batch(const FrozenLakeEnv& env, QNTables& stats,
                       const PolicyMctsConfig& cfg, std::mt19937_64& rng);

/// One episode of the rollout baseline: before every real step, re-estimate
/// all four action values with a fresh rollout batch, then act greedily on
/// the accumulated means. Stats persist across episodes.
EpisodeRecord run_episode_policy_mcts(FrozenLakeEnv& env, QNTables& stats,
                                      const PolicyMctsConfig& cfg, std::mt19937_64& rng,
                                      long episode_index = 0);

/// Argmax action by mean value q_sum/n_sa over visited entries; states with
/// no visited action map to Action::Left. Deterministic (lowest index wins
/// ties) so extracted policies are reproducible.
std::vector<Action> greedy_policy(const QNTables& tables);

/// Argmax action by raw value, lowest index wins ties.
std::vector<Action> greedy_policy(const QTable& qtable);

}  // namespace flbench
