#include "flbench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace flbench {

namespace {

// Wall-clamped destination of a single resolved direction.
StateId clamped_move(const GridMap& map, StateId s, int direction) {
    const int cols = map.cols();
    int row = s / cols;
    int col = s % cols;
    switch (direction) {
        case 0: --col; break;  // Left
        case 1: ++row; break;  // Down
        case 2: ++col; break;  // Right
        case 3: --row; break;  // Up
    }
    if (row < 0 || row >= map.rows() || col < 0 || col >= cols) return s;
    return row * cols + col;
}

}  // namespace

Mdp build_mdp(const GridMap& map, bool slippery) {
    Mdp mdp;
    mdp.n_states = map.n_states();
    mdp.start_state = map.start_state();
    mdp.transitions.resize(static_cast<std::size_t>(mdp.n_states) * kNumActions);
    mdp.terminal_reward.resize(static_cast<std::size_t>(mdp.n_states), 0.0);
    mdp.terminal_mask.resize(static_cast<std::size_t>(mdp.n_states), false);

    std::vector<double> mass(static_cast<std::size_t>(mdp.n_states));
    for (StateId s = 0; s < mdp.n_states; ++s) {
        mdp.terminal_mask[static_cast<std::size_t>(s)] = map.is_terminal(s);
        mdp.terminal_reward[static_cast<std::size_t>(s)] = map.is_goal(s) ? 1.0 : 0.0;
        if (map.is_terminal(s)) continue;

        for (int a = 0; a < kNumActions; ++a) {
            std::fill(mass.begin(), mass.end(), 0.0);
            if (slippery) {
                for (int d : {a, (a + 3) % 4, (a + 1) % 4})
                    mass[static_cast<std::size_t>(clamped_move(map, s, d))] += 1.0 / 3.0;
            } else {
                mass[static_cast<std::size_t>(clamped_move(map, s, a))] = 1.0;
            }
            auto& row = mdp.transitions[static_cast<std::size_t>(s) * kNumActions +
                                        static_cast<std::size_t>(a)];
            for (StateId t = 0; t < mdp.n_states; ++t)
                if (mass[static_cast<std::size_t>(t)] > 0.0)
                    row.push_back({t, mass[static_cast<std::size_t>(t)]});
        }
    }
    return mdp;
}

ValueIterationResult value_iteration(const Mdp& mdp, double gamma, double tol, int max_sweeps) {
    if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("value iteration requires gamma in [0, 1)");
    if (tol <= 0.0) throw ConfigError("value iteration requires tol > 0");
    if (max_sweeps < 1) throw ConfigError("value iteration requires max_sweeps >= 1");

    ValueIterationResult result;
    std::vector<double>& values = result.values.values;
    values.assign(static_cast<std::size_t>(mdp.n_states), 0.0);
    std::vector<double> next(values);

    const auto action_value = [&](StateId s, int a) {
        double total = 0.0;
        for (const auto& e : mdp.at(s, action_from_index(a))) {
            const auto t = static_cast<std::size_t>(e.next);
            total += e.prob * (mdp.terminal_reward[t] +
                               (mdp.terminal_mask[t] ? 0.0 : gamma * values[t]));
        }
        return total;
    };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double delta = 0.0;
        for (StateId s = 0; s < mdp.n_states; ++s) {
            if (mdp.terminal_mask[static_cast<std::size_t>(s)]) continue;
            double best = action_value(s, 0);
            for (int a = 1; a < kNumActions; ++a) best = std::max(best, action_value(s, a));
            delta = std::max(delta, std::abs(best - values[static_cast<std::size_t>(s)]));
            next[static_cast<std::size_t>(s)] = best;
        }
        values.swap(next);
        result.residuals.push_back(delta);
        result.sweeps = sweep + 1;
        if (delta < tol) break;
    }
    if (result.residuals.empty() || result.residuals.back() >= tol)
        throw NonConvergence("value iteration did not reach tolerance within " +
                             std::to_string(max_sweeps) + " sweeps");

    // Greedy policy w.r.t. the converged values, lowest action index wins ties.
    result.policy.actions.assign(static_cast<std::size_t>(mdp.n_states), Action::Left);
    for (StateId s = 0; s < mdp.n_states; ++s) {
        if (mdp.terminal_mask[static_cast<std::size_t>(s)]) continue;
        double best = action_value(s, 0);
        int best_action = 0;
        for (int a = 1; a < kNumActions; ++a) {
            const double v = action_value(s, a);
            if (v > best) {
                best = v;
                best_action = a;
            }
        }
        result.policy.actions[static_cast<std::size_t>(s)] = action_from_index(best_action);
    }
    return result;
}

double finite_horizon_success(const Mdp& mdp, const PolicyVector& policy, int horizon) {
    // p[s] after t sweeps = P(goal reached within t steps from s). Terminal
    // states are absorbing: goal cells stay at 1, holes at 0.
    std::vector<double> p(mdp.terminal_reward);
    std::vector<double> next(p);
    for (int t = 0; t < horizon; ++t) {
        for (StateId s = 0; s < mdp.n_states; ++s) {
            if (mdp.terminal_mask[static_cast<std::size_t>(s)]) continue;
            double total = 0.0;
            for (const auto& e : mdp.at(s, policy.actions[static_cast<std::size_t>(s)]))
                total += e.prob * p[static_cast<std::size_t>(e.next)];
            next[static_cast<std::size_t>(s)] = total;
        }
        p.swap(next);
    }
    return p[static_cast<std::size_t>(mdp.start_state)];
}

double evaluate_policy_empirically(FrozenLakeEnv& env, const PolicyVector& policy, long episodes,
                                   std::mt19937_64& rng) {
    long successes = 0;
    for (long ep = 0; ep < episodes; ++ep) {
        StateId s = env.reset();
        for (;;) {
            const StepOutcome out = env.step(policy.actions[static_cast<std::size_t>(s)], rng);
            s = out.next_state;
            if (out.terminal || out.truncated) {
                if (out.reward == 1.0) ++successes;
                break;
            }
        }
    }
    return static_cast<double>(successes) / static_cast<double>(episodes);
}

std::string render_values(const GridMap& map, const ValueFunction& values) {
    std::ostringstream out;
    char buf[32];
    for (int r = 0; r < map.rows(); ++r) {
        for (int c = 0; c < map.cols(); ++c) {
            const StateId s = r * map.cols() + c;
            std::snprintf(buf, sizeof buf, " %7.4f", values.values[static_cast<std::size_t>(s)]);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

std::string render_policy(const GridMap& map, const PolicyVector& policy) {
    static constexpr char arrows[kNumActions] = {'<', 'v', '>', '^'};
    std::ostringstream out;
    for (int r = 0; r < map.rows(); ++r) {
        for (int c = 0; c < map.cols(); ++c) {
            const StateId s = r * map.cols() + c;
            char ch;
            if (map.cell(s) == Cell::Hole) ch = 'H';
            else if (map.cell(s) == Cell::Goal) ch = 'G';
            else ch = arrows[action_index(policy.actions[static_cast<std::size_t>(s)])];
            out << ' ' << ch;
        }
        out << '\n';
    }
    return out.str();
}

std::string oracle_csv(const GridMap& map, const ValueFunction& values,
                       const PolicyVector& policy) {
    std::ostringstream out;
    out << "state,value,action\n";
    char buf[64];
    for (StateId s = 0; s < map.n_states(); ++s) {
        if (map.is_terminal(s)) {
            std::snprintf(buf, sizeof buf, "%d,%.6f,\n", s,
                          values.values[static_cast<std::size_t>(s)]);
        } else {
            std::snprintf(buf, sizeof buf, "%d,%.6f,%d\n", s,
                          values.values[static_cast<std::size_t>(s)],
                          action_index(policy.actions[static_cast<std::size_t>(s)]));
        }
        out << buf;
    }
    return out.str();
}

}  // namespace flbench
