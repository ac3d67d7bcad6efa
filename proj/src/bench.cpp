#include "flbench/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "flbench/random.hpp"

namespace flbench {

namespace {

namespace fs = std::filesystem;

void validate(const RunConfig& cfg) {
    if (cfg.episodes < 1) throw ConfigError("episodes must be >= 1");
    if (cfg.smoothing_window < 1) throw ConfigError("smoothing window must be >= 1");
    if (cfg.smoothing_window > cfg.episodes)
        throw ConfigError("smoothing window must not exceed the episode count");
    if (cfg.step_cap < 0) throw ConfigError("step cap must be positive");
    if (!(cfg.search.exploration_weight_c > 0.0) ||
        !std::isfinite(cfg.search.exploration_weight_c))
        throw ConfigError("exploration weight c must be finite and positive");
    if (cfg.qlearn.alpha <= 0.0 || cfg.qlearn.alpha > 1.0)
        throw ConfigError("alpha must be in (0, 1]");
    if (cfg.qlearn.gamma < 0.0 || cfg.qlearn.gamma > 1.0)
        throw ConfigError("gamma must be in [0, 1]");
    if (cfg.qlearn.epsilon_start < 0.0 || cfg.qlearn.epsilon_start > 1.0 ||
        cfg.qlearn.epsilon_end < 0.0 || cfg.qlearn.epsilon_end > 1.0)
        throw ConfigError("epsilon bounds must be in [0, 1]");
    if (cfg.qlearn.epsilon_start < cfg.qlearn.epsilon_end)
        throw ConfigError("epsilon_start must be >= epsilon_end");
    if (cfg.qlearn.epsilon_decay_episodes < 1)
        throw ConfigError("epsilon decay span must be >= 1");
    if (cfg.policy_mcts.simulations_per_move < 1 ||
        cfg.policy_mcts.simulations_per_move % kNumActions != 0)
        throw ConfigError("simulations per move must be a positive multiple of 4");
    if (cfg.policy_mcts.rollout_horizon < 0) throw ConfigError("rollout horizon must be positive");
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::OptimizedMcts: return "optimized_mcts";
        case Algorithm::PolicyMcts: return "policy_mcts";
        case Algorithm::QLearning: return "q_learning";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view text) {
    if (text == "optimized-mcts" || text == "optimized_mcts") return Algorithm::OptimizedMcts;
    if (text == "policy-mcts" || text == "policy_mcts") return Algorithm::PolicyMcts;
    if (text == "q-learning" || text == "q_learning") return Algorithm::QLearning;
    return std::nullopt;
}

GridMap load_map_source(const std::string& source) {
    if (source == "4x4") return parse_map(kMap4x4);
    if (source == "8x8") return parse_map(kMap8x8);
    std::ifstream in(source, std::ios::binary);
    if (!in) throw ConfigError("cannot open map file: " + source);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_map(text.str());
}

std::vector<double> moving_average(std::span<const double> series, int window) {
    std::vector<double> out(series.size());
    double running = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        running += series[i];
        if (i >= static_cast<std::size_t>(window)) running -= series[i - static_cast<std::size_t>(window)];
        const auto span = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        out[i] = running / static_cast<double>(span);
    }
    return out;
}

long stabilization_episode(std::span<const double> smoothed, double band) {
    if (smoothed.empty()) return 0;
    const double final_value = smoothed.back();
    for (std::size_t i = smoothed.size(); i-- > 0;) {
        if (std::abs(smoothed[i] - final_value) > band) return static_cast<long>(i) + 1;
    }
    return 0;
}

RunResult run_benchmark(const RunConfig& cfg) {
    validate(cfg);

    GridMap map = load_map_source(cfg.map_source);
    const int cap = cfg.step_cap > 0 ? cfg.step_cap : default_step_cap(map);
    const int n_states = map.n_states();
    FrozenLakeEnv env({std::move(map), cfg.slippery, cap});

    QNTables tables(n_states);  // optimized MCTS memory or rollout statistics
    QTable qtable(n_states);

    std::vector<double> rewards;
    std::vector<double> steps;
    rewards.reserve(static_cast<std::size_t>(cfg.episodes));
    steps.reserve(static_cast<std::size_t>(cfg.episodes));

    const auto loop_start = std::chrono::steady_clock::now();
    for (long ep = 0; ep < cfg.episodes; ++ep) {
        auto rng = episode_stream(cfg.seed, static_cast<std::uint64_t>(ep));
        EpisodeRecord rec;
        switch (cfg.algorithm) {
            case Algorithm::OptimizedMcts:
                rec = run_episode_optimized_mcts(env, tables, cfg.search, rng, ep);
                break;
            case Algorithm::PolicyMcts:
                rec = run_episode_policy_mcts(env, tables, cfg.policy_mcts, rng, ep);
                break;
            case Algorithm::QLearning:
                rec = run_episode_qlearning(env, qtable, cfg.qlearn, rng, ep);
                break;
        }
        rewards.push_back(rec.episode_return);
        steps.push_back(static_cast<double>(rec.steps));
    }
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - loop_start;

    RunResult result;
    const std::vector<double> smoothed_reward = moving_average(rewards, cfg.smoothing_window);
    const std::vector<double> smoothed_steps = moving_average(steps, cfg.smoothing_window);
    result.rows.resize(rewards.size());
    double success_sum = 0.0;
    for (std::size_t i = 0; i < rewards.size(); ++i) {
        MetricsRow& row = result.rows[i];
        row.episode = static_cast<long>(i);
        row.reward = rewards[i];
        row.steps = static_cast<int>(steps[i]);
        row.success = rewards[i] == 1.0 ? 1 : 0;
        row.smoothed_reward = smoothed_reward[i];
        row.smoothed_steps = smoothed_steps[i];
        success_sum += static_cast<double>(row.success);
        row.cumulative_success_rate = success_sum / static_cast<double>(i + 1);
    }

    const auto final_window = static_cast<std::size_t>(
        std::min<long>(10000, cfg.episodes));
    double final_successes = 0.0;
    double final_steps = 0.0;
    for (std::size_t i = rewards.size() - final_window; i < rewards.size(); ++i) {
        final_successes += rewards[i];
        final_steps += steps[i];
    }
    Summary& summary = result.summary;
    summary.algorithm = cfg.algorithm;
    summary.episodes = cfg.episodes;
    summary.seed = cfg.seed;
    summary.final_success_rate = final_successes / static_cast<double>(final_window);
    summary.overall_success_rate = success_sum / static_cast<double>(rewards.size());
    summary.mean_reward_final = summary.final_success_rate;
    summary.mean_steps_final = final_steps / static_cast<double>(final_window);
    summary.wall_time_seconds = wall.count();

    result.greedy.actions = cfg.algorithm == Algorithm::QLearning ? greedy_policy(qtable)
                                                                  : greedy_policy(tables);
    return result;
}

CompareResult compare(const std::vector<RunConfig>& cfgs) {
    if (cfgs.size() < 2) throw ConfigError("compare needs at least two run configurations");
    CompareResult result;
    result.configs = cfgs;
    std::vector<Summary> summaries;
    for (const RunConfig& cfg : cfgs) {
        result.runs.push_back(run_benchmark(cfg));
        summaries.push_back(result.runs.back().summary);
    }
    result.table = format_summary_table(summaries);
    return result;
}

void write_csv(std::span<const MetricsRow> rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "episode,reward,steps,success,smoothed_reward,smoothed_steps,cumulative_success_rate\n";
    char buf[160];
    for (const MetricsRow& row : rows) {
        std::snprintf(buf, sizeof buf, "%ld,%d,%d,%d,%.6f,%.6f,%.6f\n", row.episode,
                      static_cast<int>(row.reward), row.steps, row.success, row.smoothed_reward,
                      row.smoothed_steps, row.cumulative_success_rate);
        out << buf;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_summary_table(std::span<const Summary> summaries) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "algorithm" << std::right << std::setw(20)
        << "final_success_rate" << std::setw(13) << "mean_reward" << std::setw(12) << "mean_steps"
        << std::setw(13) << "wall_time_s" << '\n';
    out << std::fixed;
    for (const Summary& s : summaries) {
        out << std::left << std::setw(16) << algorithm_name(s.algorithm) << std::right
            << std::setprecision(6) << std::setw(20) << s.final_success_rate << std::setw(13)
            << s.mean_reward_final << std::setprecision(2) << std::setw(12) << s.mean_steps_final
            << std::setw(13) << s.wall_time_seconds << '\n';
    }
    return out.str();
}

std::string summary_csv(std::span<const Summary> summaries) {
    std::ostringstream out;
    out << "algorithm,episodes,seed,final_success_rate,overall_success_rate,"
           "mean_reward_final_10k,mean_steps_final_10k,wall_time_seconds\n";
    char buf[256];
    for (const Summary& s : summaries) {
        std::snprintf(buf, sizeof buf, "%s,%ld,%llu,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                      std::string(algorithm_name(s.algorithm)).c_str(), s.episodes,
                      static_cast<unsigned long long>(s.seed), s.final_success_rate,
                      s.overall_success_rate, s.mean_reward_final, s.mean_steps_final,
                      s.wall_time_seconds);
        out << buf;
    }
    return out.str();
}

void write_run_outputs(const RunResult& result, const std::string& dir) {
    fs::create_directories(dir);
    write_csv(result.rows, (fs::path(dir) / "metrics.csv").string());
    const Summary summaries[] = {result.summary};
    write_text_file((fs::path(dir) / "summary.txt").string(), format_summary_table(summaries));
    write_text_file((fs::path(dir) / "summary.csv").string(), summary_csv(summaries));
}

void write_compare_outputs(const CompareResult& result, const std::string& dir) {
    fs::create_directories(dir);
    std::vector<Summary> summaries;
    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        const auto name = std::string(algorithm_name(result.configs[i].algorithm));
        const fs::path run_dir = fs::path(dir) / name;
        fs::create_directories(run_dir);
        write_csv(result.runs[i].rows, (run_dir / "metrics.csv").string());
        summaries.push_back(result.runs[i].summary);
    }
    write_text_file((fs::path(dir) / "summary.txt").string(), format_summary_table(summaries));
    write_text_file((fs::path(dir) / "summary.csv").string(), summary_csv(summaries));
}

}  // namespace flbench
