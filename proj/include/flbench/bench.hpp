#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flbench/agents.hpp"
#include "flbench/oracle.hpp"

namespace flbench {

enum class Algorithm { OptimizedMcts, PolicyMcts, QLearning };

std::string_view algorithm_name(Algorithm a);  // "optimized_mcts", ...
/// Accepts CLI spellings ("optimized-mcts") as well as the canonical names.
std::optional<Algorithm> parse_algorithm(std::string_view text);

struct RunConfig {
    Algorithm algorithm = Algorithm::OptimizedMcts;
    long episodes = 100000;
    std::string map_source = "4x4";  // builtin name or path to a map file
    bool slippery = true;
    std::uint64_t seed = 0;
    int smoothing_window = 1000;
    int step_cap = 0;  // 0: default for the map
    SearchConfig search{};
    QLearnConfig qlearn{};
    PolicyMctsConfig policy_mcts{};
};

struct MetricsRow {
    long episode = 0;
    double reward = 0.0;  // in {0, 1}
    int steps = 0;
    int success = 0;  // in {0, 1}
    double smoothed_reward = 0.0;
    double smoothed_steps = 0.0;
    double cumulative_success_rate = 0.0;
};

struct Summary {
    Algorithm algorithm = Algorithm::OptimizedMcts;
    long episodes = 0;
    std::uint64_t seed = 0;
    double final_success_rate = 0.0;  // last min(10000, episodes) episodes
    double overall_success_rate = 0.0;
    double mean_reward_final = 0.0;  // equals final_success_rate (0/1 rewards)
    double mean_steps_final = 0.0;
    double wall_time_seconds = 0.0;
};

struct RunResult {
    std::vector<MetricsRow> rows;
    Summary summary;
    PolicyVector greedy;  // learned greedy policy after the last episode
};

/// "4x4"/"8x8" builtin layouts, anything else is read as a map file.
GridMap load_map_source(const std::string& source);

/// Trailing moving average: element i is the mean of the last min(window, i+1)
/// elements ending at i. Output length equals input length.
std::vector<double> moving_average(std::span<const double> series, int window);

/// First index after which the series never deviates more than `band` from
/// its final value. 0 when the series never leaves the band.
long stabilization_episode(std::span<const double> smoothed, double band = 0.05);

/// Runs the configured agent for cfg.episodes episodes with learning state
/// persisting across episodes. Wall time covers the episode loop only.
/// Throws ConfigError for invalid configurations.
RunResult run_benchmark(const RunConfig& cfg);

struct CompareResult {
    std::vector<RunConfig> configs;
    std::vector<RunResult> runs;
    std::string table;  // aligned per-algorithm summary rows
};

/// Runs every config sequentially (>= 2 required) and formats the comparison
/// table. Configs are expected to share the map and root seed.
CompareResult compare(const std::vector<RunConfig>& cfgs);

/// metrics.csv with the exact header
/// episode,reward,steps,success,smoothed_reward,smoothed_steps,cumulative_success_rate
/// and LF line endings; reals carry 6 decimals.
void write_csv(std::span<const MetricsRow> rows, const std::string& path);

std::string format_summary_table(std::span<const Summary> summaries);
std::string summary_csv(std::span<const Summary> summaries);

/// DIR/metrics.csv, DIR/summary.txt, DIR/summary.csv for a single run.
void write_run_outputs(const RunResult& result, const std::string& dir);
/// DIR/<algorithm>/metrics.csv per run plus combined DIR/summary.{txt,csv}.
void write_compare_outputs(const CompareResult& result, const std::string& dir);

}  // namespace flbench
