#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "flbench/env.hpp"

namespace flbench {

struct SearchConfig {
    double exploration_weight_c = 1.4;
};

/// Score of an unvisited (s, a): compares greater than every finite UCT value.
inline constexpr double kUnvisitedUct = std::numeric_limits<double>::infinity();

/// UCT(s,a) = q_sum/n_sa + c * sqrt(ln(n_s) / n_sa), or kUnvisitedUct when
/// n_sa == 0. Throws InvalidCounts if n_sa > n_s.
double uct_value(double q_sum, std::uint64_t n_sa, std::uint64_t n_s, double c);

/// Flat cumulative-reward and visit-count tables over (state, action). The
/// whole search memory: no tree nodes, N(s) is the row sum of visit counts.
class QNTables {
public:
    explicit QNTables(int n_states);

    int n_states() const { return n_states_; }
    double q_sum(StateId s, Action a) const { return q_[flat(s, a)]; }
    std::uint64_t n_sa(StateId s, Action a) const { return n_[flat(s, a)]; }
    std::uint64_t n_s(StateId s) const;

    /// q_sum(s,a) += value; n_sa(s,a) += 1.
    void add(StateId s, Action a, double value);

private:
    std::size_t flat(StateId s, Action a) const {
        return static_cast<std::size_t>(s) * kNumActions + static_cast<std::size_t>(action_index(a));
    }

    int n_states_;
    std::vector<double> q_;
    std::vector<std::uint64_t> n_;
};

/// Argmax of uct_value over the four actions. Unvisited actions rank above
/// all visited ones; ties break uniformly at random from rng (the only draws
/// this function consumes).
Action select_action(const QNTables& tables, StateId s, const SearchConfig& cfg,
                     std::mt19937_64& rng);

/// Every-visit credit: each (s, a) occurrence on the path receives the full
/// episode return and one visit.
void backpropagate(QNTables& tables, std::span<const std::pair<StateId, Action>> path,
                   double episode_return);

/// Debug dump, columns state,action,q_sum,n_sa.
void dump_csv(const QNTables& tables, std::ostream& out);

}  // namespace flbench
