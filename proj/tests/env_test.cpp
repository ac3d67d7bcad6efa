#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "doctest.h"
#include "flbench/env.hpp"
#include "flbench/random.hpp"

using namespace flbench;

namespace {

// Distribution as a map for order-independent comparisons.
std::map<StateId, double> as_map(const std::vector<TransitionEntry>& entries) {
    std::map<StateId, double> m;
    for (const auto& e : entries) {
        REQUIRE(m.find(e.next) == m.end());  // merged output has unique states
        m[e.next] = e.prob;
    }
    return m;
}

FrozenLakeEnv make_env(std::string_view map_text, bool slippery, int cap = 0) {
    GridMap map = parse_map(map_text);
    if (cap == 0) cap = default_step_cap(map);
    return FrozenLakeEnv({std::move(map), slippery, cap});
}

}  // namespace

TEST_CASE("parse_map: smallest legal map") {
    const GridMap map = parse_map("SG");
    CHECK(map.rows() == 1);
    CHECK(map.cols() == 2);
    CHECK(map.cell(0) == Cell::Start);
    CHECK(map.cell(1) == Cell::Goal);
    CHECK(map.start_state() == 0);
}

TEST_CASE("parse_map: canonical 4x4 layout") {
    const GridMap map = parse_map("SFFF\nFHFH\nFFFH\nHFFG");
    REQUIRE(map.rows() == 4);
    REQUIRE(map.cols() == 4);
    CHECK(map.start_state() == 0);
    CHECK(map.is_goal(15));
    // Enumerated from the layout text: holes at 5, 7, 11, 12; everything else
    // frozen except start and goal.
    const std::vector<StateId> holes = {5, 7, 11, 12};
    for (StateId s = 0; s < 16; ++s) {
        const bool is_hole = std::find(holes.begin(), holes.end(), s) != holes.end();
        if (s == 0) CHECK(map.cell(s) == Cell::Start);
        else if (s == 15) CHECK(map.cell(s) == Cell::Goal);
        else if (is_hole) CHECK(map.cell(s) == Cell::Hole);
        else CHECK(map.cell(s) == Cell::Frozen);
        CHECK(map.is_terminal(s) == (is_hole || s == 15));
    }
    CHECK(parse_map(kMap4x4).n_states() == 16);
    CHECK(parse_map(kMap8x8).n_states() == 64);
}

TEST_CASE("parse_map: rejects malformed input") {
    CHECK_THROWS_AS(parse_map("SS"), MalformedMap);        // two starts
    CHECK_THROWS_AS(parse_map("SF\nFGF"), MalformedMap);   // ragged rows
    CHECK_THROWS_AS(parse_map("SXG"), MalformedMap);       // bad character
    CHECK_THROWS_AS(parse_map("FFG"), MalformedMap);       // no start
    CHECK_THROWS_AS(parse_map("SFF"), MalformedMap);       // no goal
    CHECK_THROWS_AS(parse_map(""), MalformedMap);          // empty
    CHECK_THROWS_AS(parse_map("SG\n\nFG"), MalformedMap);  // interior empty row
}

TEST_CASE("parse_map: accepts CRLF and trailing newline") {
    const GridMap crlf = parse_map("SF\r\nFG\r\n");
    CHECK(crlf.rows() == 2);
    CHECK(crlf.cols() == 2);
    CHECK(crlf.is_goal(3));
    const GridMap trailing = parse_map("SG\n");
    CHECK(trailing.n_states() == 2);
}

TEST_CASE("transition_distribution: slippery corner spreads 1/3 over intended and perpendiculars") {
    const GridMap map = parse_map(kMap4x4);
    const auto entries = transition_distribution(map, true, 0, Action::Down);
    // Intended Down -> 4; perpendicular Left hits the wall -> stay 0;
    // perpendicular Right -> 1.
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].next == 4);  // intended direction listed first
    const auto dist = as_map(entries);
    CHECK(dist.at(4) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(dist.at(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(dist.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("transition_distribution: non-slippery is deterministic") {
    const GridMap map = parse_map(kMap4x4);
    const auto entries = transition_distribution(map, false, 0, Action::Right);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].next == 1);
    CHECK(entries[0].prob == 1.0);
}

TEST_CASE("transition_distribution: wall slips merge into the stay entry") {
    const GridMap map = parse_map("SG");
    const auto dist = as_map(transition_distribution(map, true, 0, Action::Right));
    REQUIRE(dist.size() == 2);
    CHECK(dist.at(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(dist.at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("transition_distribution: rejects terminal states") {
    const GridMap map = parse_map(kMap4x4);
    CHECK_THROWS_AS(transition_distribution(map, true, 5, Action::Left), TerminalStateQuery);
    CHECK_THROWS_AS(transition_distribution(map, true, 15, Action::Left), TerminalStateQuery);
}

TEST_CASE("transition_distribution: probabilities sum to one on every non-terminal (s,a)") {
    for (const auto map_text : {kMap4x4, kMap8x8}) {
        const GridMap map = parse_map(map_text);
        for (const bool slippery : {true, false}) {
            for (StateId s = 0; s < map.n_states(); ++s) {
                if (map.is_terminal(s)) continue;
                for (int a = 0; a < kNumActions; ++a) {
                    const auto entries =
                        transition_distribution(map, slippery, s, action_from_index(a));
                    double total = 0.0;
                    for (const auto& e : entries) {
                        CHECK(e.next >= 0);
                        CHECK(e.next < map.n_states());
                        CHECK(e.prob > 0.0);
                        total += e.prob;
                    }
                    CHECK(std::abs(total - 1.0) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("reset returns the start state and is idempotent") {
    auto env = make_env(kMap4x4, true);
    CHECK(env.reset() == 0);
    CHECK(env.reset() == 0);
    auto tiny = make_env("SG", true);
    CHECK(tiny.reset() == 0);

    // After some steps, reset restores the start and the step budget.
    std::mt19937_64 rng(7);
    env.reset();
    env.step(Action::Down, rng);
    CHECK(env.reset() == 0);
    CHECK(env.steps_taken() == 0);
}

TEST_CASE("step: deterministic moves onto goal and hole") {
    auto env = make_env(kMap4x4, false);
    std::mt19937_64 rng(1);

    env.reset();
    // 0 -> 4 -> 8 -> 9 -> 10 -> 14 keeps to frozen cells.
    for (const Action a : {Action::Down, Action::Down, Action::Right, Action::Right, Action::Down}) {
        const auto out = env.step(a, rng);
        CHECK(out.reward == 0.0);
        CHECK_FALSE(out.terminal);
        CHECK_FALSE(out.truncated);
    }
    REQUIRE(env.state() == 14);
    const auto out = env.step(Action::Right, rng);
    CHECK(out.next_state == 15);
    CHECK(out.reward == 1.0);
    CHECK(out.terminal);
    CHECK_FALSE(out.truncated);

    env.reset();
    env.step(Action::Right, rng);
    REQUIRE(env.state() == 1);
    const auto hole = env.step(Action::Down, rng);
    CHECK(hole.next_state == 5);
    CHECK(hole.reward == 0.0);
    CHECK(hole.terminal);
}

TEST_CASE("step: throws once the episode is over") {
    auto env = make_env("SG", false);
    std::mt19937_64 rng(3);
    env.reset();
    const auto out = env.step(Action::Right, rng);
    REQUIRE(out.terminal);
    CHECK_THROWS_AS(env.step(Action::Left, rng), SteppedAfterEpisodeEnd);
    env.reset();
    CHECK_NOTHROW(env.step(Action::Left, rng));
}

TEST_CASE("step: truncates at the step cap with reward zero") {
    auto env = make_env(kMap4x4, false, 3);
    std::mt19937_64 rng(5);
    env.reset();
    StepOutcome out{};
    for (int i = 0; i < 3; ++i) out = env.step(Action::Left, rng);  // bounces in place
    CHECK(out.truncated);
    CHECK_FALSE(out.terminal);
    CHECK(out.reward == 0.0);
    CHECK(out.next_state == 0);
    CHECK_THROWS_AS(env.step(Action::Left, rng), SteppedAfterEpisodeEnd);
}

TEST_CASE("step: a step onto the goal at the cap is terminal, not truncated") {
    auto env = make_env("SG", false, 1);
    std::mt19937_64 rng(9);
    env.reset();
    const auto out = env.step(Action::Right, rng);
    CHECK(out.terminal);
    CHECK_FALSE(out.truncated);
    CHECK(out.reward == 1.0);
}

TEST_CASE("step: reward is one exactly on goal entry, zero otherwise") {
    auto env = make_env(kMap4x4, true);
    std::mt19937_64 rng(11);
    for (int episode = 0; episode < 2000; ++episode) {
        StateId s = env.reset();
        for (;;) {
            const auto out = env.step(action_from_index(static_cast<int>(uniform_index(rng, 4))), rng);
            CHECK(out.reward == (env.map().is_goal(out.next_state) ? 1.0 : 0.0));
            CHECK(out.terminal == env.map().is_terminal(out.next_state));
            if (out.truncated) CHECK_FALSE(out.terminal);
            s = out.next_state;
            if (out.terminal || out.truncated) break;
        }
        (void)s;
    }
}

TEST_CASE("step: fixed seed yields a bit-identical outcome sequence") {
    const auto run_once = [] {
        auto env = make_env(kMap4x4, true);
        std::mt19937_64 rng(123456);
        std::vector<StepOutcome> outcomes;
        env.reset();
        for (int i = 0; i < 200; ++i) {
            if (env.episode_over()) env.reset();
            outcomes.push_back(env.step(action_from_index(i % 4), rng));
        }
        return outcomes;
    };
    const auto a = run_once();
    const auto b = run_once();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].next_state == b[i].next_state);
        CHECK(a[i].reward == b[i].reward);
        CHECK(a[i].terminal == b[i].terminal);
        CHECK(a[i].truncated == b[i].truncated);
    }
}

TEST_CASE("step: empirical frequencies match the slip distribution") {
    // 300k samples of (s=0, Down) on the slippery 4x4 map. Expected next
    // states {4, 0, 1} with probability 1/3 each; chi-square with 2 degrees
    // of freedom at alpha = 0.001 has critical value 13.816.
    auto env = make_env(kMap4x4, true);
    std::mt19937_64 rng(20240229);
    const int n = 300000;
    std::map<StateId, int> counts;
    for (int i = 0; i < n; ++i) {
        env.reset();
        counts[env.step(Action::Down, rng).next_state] += 1;
    }
    REQUIRE(counts.size() == 3);
    double chi2 = 0.0;
    for (const StateId s : {4, 0, 1}) {
        const double observed = counts.at(s);
        const double expected = n / 3.0;
        CHECK(std::abs(observed / n - 1.0 / 3.0) < 0.01);
        chi2 += (observed - expected) * (observed - expected) / expected;
    }
    CHECK(chi2 < 13.816);
}

TEST_CASE("simulation_copy: independent state with a fresh budget") {
    auto env = make_env(kMap4x4, true, 50);
    std::mt19937_64 rng(77);
    env.reset();
    env.step(Action::Down, rng);
    const StateId before = env.state();
    const int steps_before = env.steps_taken();

    auto sim = env.simulation_copy(10);
    CHECK(sim.state() == before);
    CHECK(sim.steps_taken() == 0);
    CHECK(sim.step_cap() == 10);
    for (int i = 0; i < 10 && !sim.episode_over(); ++i) sim.step(Action::Up, rng);

    CHECK(env.state() == before);
    CHECK(env.steps_taken() == steps_before);
    CHECK_FALSE(env.episode_over());
}

TEST_CASE("default_step_cap scales with the map height") {
    CHECK(default_step_cap(parse_map(kMap4x4)) == 100);
    CHECK(default_step_cap(parse_map(kMap8x8)) == 200);
    CHECK(default_step_cap(parse_map("SG")) == 25);
}
