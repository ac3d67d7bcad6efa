#include "flbench/search.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "flbench/random.hpp"

namespace flbench {

double uct_value(double q_sum, std::uint64_t n_sa, std::uint64_t n_s, double c) {
    if (n_sa > n_s)
        throw InvalidCounts("n_sa (" + std::to_string(n_sa) + ") exceeds n_s (" +
                            std::to_string(n_s) + ")");
    if (n_sa == 0) return kUnvisitedUct;
    const double mean = q_sum / static_cast<double>(n_sa);
    return mean + c * std::sqrt(std::log(static_cast<double>(n_s)) / static_cast<double>(n_sa));
}

QNTables::QNTables(int n_states)
    : n_states_(n_states),
      q_(static_cast<std::size_t>(n_states) * kNumActions, 0.0),
      n_(static_cast<std::size_t>(n_states) * kNumActions, 0) {}

std::uint64_t QNTables::n_s(StateId s) const {
    std::uint64_t total = 0;
    for (int a = 0; a < kNumActions; ++a) total += n_[flat(s, action_from_index(a))];
    return total;
}

void QNTables::add(StateId s, Action a, double value) {
    q_[flat(s, a)] += value;
    n_[flat(s, a)] += 1;
}

Action select_action(const QNTables& tables, StateId s, const SearchConfig& cfg,
                     std::mt19937_64& rng) {
    const std::uint64_t total = tables.n_s(s);
    double best = -kUnvisitedUct;
    int candidates[kNumActions];
    int n_candidates = 0;
    for (int i = 0; i < kNumActions; ++i) {
        const Action a = action_from_index(i);
        const double v = uct_value(tables.q_sum(s, a), tables.n_sa(s, a), total,
                                   cfg.exploration_weight_c);
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

void backpropagate(QNTables& tables, std::span<const std::pair<StateId, Action>> path,
                   double episode_return) {
    for (const auto& [s, a] : path) tables.add(s, a, episode_return);
}

void dump_csv(const QNTables& tables, std::ostream& out) {
    out << "state,action,q_sum,n_sa\n";
    char buf[96];
    for (StateId s = 0; s < tables.n_states(); ++s) {
        for (int i = 0; i < kNumActions; ++i) {
            const Action a = action_from_index(i);
            std::snprintf(buf, sizeof buf, "%d,%d,%.6f,%llu\n", s, i, tables.q_sum(s, a),
                          static_cast<unsigned long long>(tables.n_sa(s, a)));
            out << buf;
        }
    }
}

}  // namespace flbench
