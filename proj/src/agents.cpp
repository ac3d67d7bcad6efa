#include "flbench/agents.hpp"

#include <algorithm>
#include <utility>

#include "flbench/random.hpp"

namespace flbench {

namespace {

using Clock = std::chrono::steady_clock;

EpisodeRecord make_record(long episode_index, double episode_return, int steps,
                          Clock::time_point t0) {
    EpisodeRecord rec;
    rec.episode_index = episode_index;
    rec.episode_return = episode_return;
    rec.steps = steps;
    rec.success = episode_return == 1.0;
    rec.wall_time = Clock::now() - t0;
    return rec;
}

// Uniform choice among the argmax entries of four values.
template <typename ValueAt>
Action argmax_action(ValueAt&& value_at, std::mt19937_64& rng) {
    double best = value_at(0);
    int candidates[kNumActions] = {0};
    int n_candidates = 1;
    for (int i = 1; i < kNumActions; ++i) {
        const double v = value_at(i);
        if (v > best) {
            best = v;
            candidates[0] = i;
            n_candidates = 1;
        } else if (v == best) {
            candidates[n_candidates++] = i;
        }
    }
    if (n_candidates == 1) return action_from_index(candidates[0]);
    return action_from_index(candidates[uniform_index(rng, static_cast<std::uint32_t>(n_candidates))]);
}

}  // namespace

double epsilon_at(const QLearnConfig& cfg, long episode_index) {
    if (episode_index >= cfg.epsilon_decay_episodes) return cfg.epsilon_end;
    const double frac = static_cast<double>(episode_index) /
                        static_cast<double>(cfg.epsilon_decay_episodes);
    return cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * frac;
}

QTable::QTable(int n_states)
    : n_states_(n_states), v_(static_cast<std::size_t>(n_states) * kNumActions, 0.0) {}

double QTable::max_q(StateId s) const {
    double best = q(s, Action::Left);
    for (int i = 1; i < kNumActions; ++i) best = std::max(best, q(s, action_from_index(i)));
    return best;
}

Action epsilon_greedy_action(const QTable& qtable, StateId s, double epsilon,
                             std::mt19937_64& rng) {
    if (epsilon > 0.0 && next_double(rng) < epsilon)
        return action_from_index(uniform_index(rng, kNumActions));
    return argmax_action([&](int i) { return qtable.q(s, action_from_index(i)); }, rng);
}

EpisodeRecord run_episode_optimized_mcts(FrozenLakeEnv& env, QNTables& tables,
                                         const SearchConfig& cfg, std::mt19937_64& rng,
                                         long episode_index) {
    const auto t0 = Clock::now();
    StateId s = env.reset();
    std::vector<std::pair<StateId, Action>> path;
    double episode_return = 0.0;
    for (;;) {
        const Action a = select_action(tables, s, cfg, rng);
        path.emplace_back(s, a);
        const StepOutcome out = env.step(a, rng);
        s = out.next_state;
        if (out.terminal || out.truncated) {
            episode_return = out.reward;
            break;
        }
    }
    backpropagate(tables, path, episode_return);
    return make_record(episode_index, episode_return, static_cast<int>(path.size()), t0);
}

EpisodeRecord run_episode_qlearning(FrozenLakeEnv& env, QTable& qtable, const QLearnConfig& cfg,
                                    std::mt19937_64& rng, long episode_index) {
    const auto t0 = Clock::now();
    const double epsilon = epsilon_at(cfg, episode_index);
    StateId s = env.reset();
    int steps = 0;
    double episode_return = 0.0;
    for (;;) {
        const Action a = epsilon_greedy_action(qtable, s, epsilon, rng);
        const StepOutcome out = env.step(a, rng);
        ++steps;
        const double bootstrap =
            (out.terminal || out.truncated) ? 0.0 : qtable.max_q(out.next_state);
        double& q = qtable.q(s, a);
        q += cfg.alpha * (out.reward + cfg.gamma * bootstrap - q);
        s = out.next_state;
        if (out.terminal || out.truncated) {
            episode_return = out.reward;
            break;
        }
    }
    return make_record(episode_index, episode_return, steps, t0);
}

void run_rollout_batch(const FrozenLakeEnv& env, QNTables& stats, const PolicyMctsConfig& cfg,
                       std::mt19937_64& rng) {
    const StateId s = env.state();
    const int per_action = cfg.simulations_per_move / kNumActions;
    const int horizon = cfg.rollout_horizon > 0 ? cfg.rollout_horizon : env.step_cap();
    for (int i = 0; i < kNumActions; ++i) {
        const Action first = action_from_index(i);
        for (int r = 0; r < per_action; ++r) {
            FrozenLakeEnv sim = env.simulation_copy(horizon);
            StepOutcome out = sim.step(first, rng);
            while (!out.terminal && !out.truncated)
                out = sim.step(action_from_index(uniform_index(rng, kNumActions)), rng);
            stats.add(s, first, out.reward);
        }
    }
}

EpisodeRecord run_episode_policy_mcts(FrozenLakeEnv& env, QNTables& stats,
                                      const PolicyMctsConfig& cfg, std::mt19937_64& rng,
                                      long episode_index) {
    const auto t0 = Clock::now();
    StateId s = env.reset();
    int steps = 0;
    double episode_return = 0.0;
    for (;;) {
        run_rollout_batch(env, stats, cfg, rng);
        const Action a = argmax_action(
            [&](int i) {
                const Action act = action_from_index(i);
                const std::uint64_t n = stats.n_sa(s, act);
                return n == 0 ? 0.0 : stats.q_sum(s, act) / static_cast<double>(n);
            },
            rng);
        const StepOutcome out = env.step(a, rng);
        ++steps;
        s = out.next_state;
        if (out.terminal || out.truncated) {
            episode_return = out.reward;
            break;
        }
    }
    return make_record(episode_index, episode_return, steps, t0);
}

namespace {

template <typename MeanAt>
std::vector<Action> extract_greedy(int n_states, MeanAt&& mean_at) {
    std::vector<Action> policy(static_cast<std::size_t>(n_states), Action::Left);
    for (StateId s = 0; s < n_states; ++s) {
        double best = -1.0;
        int best_action = 0;
        for (int i = 0; i < kNumActions; ++i) {
            const double v = mean_at(s, i);
            if (v > best) {
                best = v;
                best_action = i;
            }
        }
        policy[static_cast<std::size_t>(s)] = action_from_index(best_action);
    }
    return policy;
}

}  // namespace

std::vector<Action> greedy_policy(const QNTables& tables) {
    // Unvisited entries are skipped; a state with no visits keeps Action::Left.
    return extract_greedy(tables.n_states(), [&](StateId s, int i) {
        const Action a = action_from_index(i);
        const std::uint64_t n = tables.n_sa(s, a);
        return n == 0 ? -1.0 : tables.q_sum(s, a) / static_cast<double>(n);
    });
}

std::vector<Action> greedy_policy(const QTable& qtable) {
    return extract_greedy(qtable.n_states(),
                          [&](StateId s, int i) { return qtable.q(s, action_from_index(i)); });
}

}  // namespace flbench
