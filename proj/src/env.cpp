#include "flbench/env.hpp"

#include <array>
#include <string>
#include <utility>

#include "flbench/random.hpp"

namespace flbench {

const std::string_view kMap4x4 =
    "SFFF\n"
    "FHFH\n"
    "FFFH\n"
    "HFFG\n";

const std::string_view kMap8x8 =
    "SFFFFFFF\n"
    "FFFFFFFF\n"
    "FFFHFFFF\n"
    "FFFFFHFF\n"
    "FFFHFFFF\n"
    "FHHFFFHF\n"
    "FHFFHFHF\n"
    "FFFHFFFG\n";

GridMap::GridMap(int rows, int cols, std::vector<Cell> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)), start_(-1) {
    if (rows_ <= 0 || cols_ <= 0) throw MalformedMap("map must have positive dimensions");
    if (cells_.size() != static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_))
        throw MalformedMap("cell count does not match rows x cols");
    int starts = 0;
    int goals = 0;
    for (StateId s = 0; s < n_states(); ++s) {
        if (cells_[static_cast<std::size_t>(s)] == Cell::Start) {
            ++starts;
            start_ = s;
        } else if (cells_[static_cast<std::size_t>(s)] == Cell::Goal) {
            ++goals;
        }
    }
    if (starts != 1) throw MalformedMap("map must contain exactly one start cell, found " +
                                        std::to_string(starts));
    if (goals < 1) throw MalformedMap("map must contain at least one goal cell");
}

GridMap parse_map(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            if (nl == std::string_view::npos || nl + 1 == text.size()) break;  // trailing newline
            throw MalformedMap("empty map row");
        }
        lines.push_back(line);
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (lines.empty()) throw MalformedMap("map text is empty");

    const std::size_t cols = lines.front().size();
    std::vector<Cell> cells;
    cells.reserve(lines.size() * cols);
    for (const auto& line : lines) {
        if (line.size() != cols) throw MalformedMap("map rows have unequal lengths");
        for (char ch : line) {
            switch (ch) {
                case 'S': cells.push_back(Cell::Start); break;
                case 'F': cells.push_back(Cell::Frozen); break;
                case 'H': cells.push_back(Cell::Hole); break;
                case 'G': cells.push_back(Cell::Goal); break;
                default:
                    throw MalformedMap(std::string("invalid map character '") + ch + "'");
            }
        }
    }
    return GridMap(static_cast<int>(lines.size()), static_cast<int>(cols), std::move(cells));
}

int default_step_cap(const GridMap& map) { return 25 * map.rows(); }

namespace {

StateId resolved_move(const GridMap& map, StateId s, Action a) {
    const int cols = map.cols();
    int row = s / cols;
    int col = s % cols;
    switch (a) {
        case Action::Left: --col; break;
        case Action::Down: ++row; break;
        case Action::Right: ++col; break;
        case Action::Up: --row; break;
    }
    if (row < 0 || row >= map.rows() || col < 0 || col >= cols) return s;  // wall: stay put
    return row * cols + col;
}

}  // namespace

std::vector<TransitionEntry> transition_distribution(const GridMap& map, bool slippery,
                                                     StateId s, Action a) {
    if (map.is_terminal(s))
        throw TerminalStateQuery("no transitions out of terminal state " + std::to_string(s));

    std::vector<TransitionEntry> out;
    const auto add = [&out](StateId next, double prob) {
        for (auto& e : out) {
            if (e.next == next) {
                e.prob += prob;
                return;
            }
        }
        out.push_back({next, prob});
    };

    if (!slippery) {
        add(resolved_move(map, s, a), 1.0);
        return out;
    }
    // Intended direction plus the two perpendiculars, 1/3 each. The opposite
    // direction never fires.
    const int ai = action_index(a);
    for (int d : {ai, (ai + 3) % 4, (ai + 1) % 4})
        add(resolved_move(map, s, action_from_index(d)), 1.0 / 3.0);
    return out;
}

// Pre-sampled cumulative form of transition_distribution for every (s, a);
// shared immutably between an env and its simulation copies.
struct FrozenLakeEnv::Model {
    struct CumEntry {
        double cum;
        StateId next;
    };
    struct Dist {
        int n = 0;
        std::array<CumEntry, 3> e{};
    };

    GridMap map;
    bool slippery;
    std::vector<Dist> dists;

    Model(GridMap m, bool slip) : map(std::move(m)), slippery(slip) {
        dists.resize(static_cast<std::size_t>(map.n_states()) * kNumActions);
        for (StateId s = 0; s < map.n_states(); ++s) {
            if (map.is_terminal(s)) continue;
            for (int a = 0; a < kNumActions; ++a) {
                Dist& d = dists[static_cast<std::size_t>(s) * kNumActions + a];
                double acc = 0.0;
                for (const auto& entry :
                     transition_distribution(map, slippery, s, action_from_index(a))) {
                    acc += entry.prob;
                    d.e[static_cast<std::size_t>(d.n++)] = {acc, entry.next};
                }
            }
        }
    }
};

FrozenLakeEnv::FrozenLakeEnv(EnvConfig cfg)
    : model_(std::make_shared<const Model>(std::move(cfg.map), cfg.slippery)),
      step_cap_(cfg.step_cap),
      state_(model_->map.start_state()) {
    if (step_cap_ < 1) throw ConfigError("step_cap must be >= 1");
}

StateId FrozenLakeEnv::reset() {
    state_ = model_->map.start_state();
    steps_ = 0;
    terminal_ = false;
    truncated_ = false;
    return state_;
}

StepOutcome FrozenLakeEnv::step(Action a, std::mt19937_64& rng) {
    if (terminal_ || truncated_)
        throw SteppedAfterEpisodeEnd("step() after the episode ended; call reset()");

    const auto& dist = model_->dists[static_cast<std::size_t>(state_) * kNumActions +
                                     static_cast<std::size_t>(action_index(a))];
    StateId next = dist.e[static_cast<std::size_t>(dist.n - 1)].next;
    if (dist.n > 1) {
        const double u = next_double(rng);
        for (int i = 0; i < dist.n; ++i) {
            if (u < dist.e[static_cast<std::size_t>(i)].cum) {
                next = dist.e[static_cast<std::size_t>(i)].next;
                break;
            }
        }
    }

    ++steps_;
    state_ = next;
    terminal_ = model_->map.is_terminal(next);
    truncated_ = !terminal_ && steps_ >= step_cap_;
    return {next, model_->map.is_goal(next) ? 1.0 : 0.0, terminal_, truncated_};
}

FrozenLakeEnv FrozenLakeEnv::simulation_copy(int step_cap) const {
    FrozenLakeEnv copy = *this;
    copy.step_cap_ = step_cap;
    copy.steps_ = 0;
    copy.truncated_ = false;
    return copy;
}

const GridMap& FrozenLakeEnv::map() const { return model_->map; }

bool FrozenLakeEnv::slippery() const { return model_->slippery; }

}  // namespace flbench
