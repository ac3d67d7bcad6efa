// flbench: FrozenLake decision-making benchmark CLI.
//
//   flbench run     -- train one algorithm, write metrics.csv + summaries
//   flbench compare -- run all three algorithms on the same seed and map
//   flbench oracle  -- exact DP solution of the map (values, policy, p*)

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flbench/bench.hpp"

namespace {

using namespace flbench;

struct CliOptions {
    std::string algo = "optimized-mcts";
    std::string map = "4x4";
    std::string out_dir;
    std::string oracle_csv_path;
    long episodes = 100000;
    std::uint64_t seed = 0;
    bool no_slippery = false;
    int window = 1000;
    double c = 1.4;
    int sims_per_move = 100;
    double alpha = 0.1;
    double gamma = 0.99;
    double epsilon_start = 1.0;
    double epsilon_end = 0.01;
    long epsilon_decay = 50000;
    double oracle_gamma = 0.99;
    int horizon = 100;
};

RunConfig make_run_config(const CliOptions& opt, Algorithm algorithm) {
    RunConfig cfg;
    cfg.algorithm = algorithm;
    cfg.episodes = opt.episodes;
    cfg.map_source = opt.map;
    cfg.slippery = !opt.no_slippery;
    cfg.seed = opt.seed;
    cfg.smoothing_window = opt.window;
    cfg.search.exploration_weight_c = opt.c;
    cfg.policy_mcts.simulations_per_move = opt.sims_per_move;
    cfg.qlearn.alpha = opt.alpha;
    cfg.qlearn.gamma = opt.gamma;
    cfg.qlearn.epsilon_start = opt.epsilon_start;
    cfg.qlearn.epsilon_end = opt.epsilon_end;
    cfg.qlearn.epsilon_decay_episodes = opt.epsilon_decay;
    return cfg;
}

void add_hyperparameter_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--c", opt.c, "UCT exploration weight");
    cmd->add_option("--sims-per-move", opt.sims_per_move,
                    "rollouts per real step for policy-mcts (multiple of 4)");
    cmd->add_option("--alpha", opt.alpha, "Q-Learning learning rate");
    cmd->add_option("--gamma", opt.gamma, "Q-Learning discount factor");
    cmd->add_option("--epsilon-start", opt.epsilon_start, "initial exploration rate");
    cmd->add_option("--epsilon-end", opt.epsilon_end, "final exploration rate");
    cmd->add_option("--epsilon-decay", opt.epsilon_decay, "episodes to anneal epsilon over");
    cmd->add_option("--window", opt.window, "smoothing window for the metric curves");
}

int cmd_run(const CliOptions& opt) {
    const auto algorithm = parse_algorithm(opt.algo);
    if (!algorithm) throw ConfigError("unknown algorithm: " + opt.algo);
    const RunConfig cfg = make_run_config(opt, *algorithm);
    const RunResult result = run_benchmark(cfg);
    write_run_outputs(result, opt.out_dir);
    const Summary summaries[] = {result.summary};
    std::cout << format_summary_table(summaries);
    return 0;
}

int cmd_compare(const CliOptions& opt) {
    const std::vector<RunConfig> cfgs = {
        make_run_config(opt, Algorithm::OptimizedMcts),
        make_run_config(opt, Algorithm::PolicyMcts),
        make_run_config(opt, Algorithm::QLearning),
    };
    const CompareResult result = compare(cfgs);
    write_compare_outputs(result, opt.out_dir);
    std::cout << result.table;
    return 0;
}

int cmd_oracle(const CliOptions& opt) {
    const GridMap map = load_map_source(opt.map);
    const Mdp mdp = build_mdp(map, !opt.no_slippery);
    const ValueIterationResult vi = value_iteration(mdp, opt.oracle_gamma, 1e-12);
    const double p_star = finite_horizon_success(mdp, vi.policy, opt.horizon);

    std::cout << "optimal state values (gamma=" << opt.oracle_gamma << "):\n"
              << render_values(map, vi.values) << "optimal policy:\n"
              << render_policy(map, vi.policy);
    std::printf("p* = %.6f (success probability within %d steps)\n", p_star, opt.horizon);

    if (!opt.oracle_csv_path.empty()) {
        std::ofstream out(opt.oracle_csv_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open for writing: " + opt.oracle_csv_path);
        out << oracle_csv(map, vi.values, vi.policy);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FrozenLake decision-making benchmark"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* run = app.add_subcommand("run", "run one algorithm and write its metrics");
    run->add_option("--algo", opt.algo, "optimized-mcts | policy-mcts | q-learning")
        ->required()
        ->check(CLI::IsMember({"optimized-mcts", "policy-mcts", "q-learning"}));
    run->add_option("--episodes", opt.episodes, "episodes to run (default 100000)");
    run->add_option("--map", opt.map, "4x4 | 8x8 | path to a map file")->required();
    run->add_flag("--no-slippery", opt.no_slippery, "deterministic transitions");
    run->add_option("--seed", opt.seed, "root seed")->required();
    run->add_option("--out", opt.out_dir, "output directory")->required();
    add_hyperparameter_flags(run, opt);

    CLI::App* cmp = app.add_subcommand("compare", "run all three algorithms on one seed");
    cmp->add_option("--episodes", opt.episodes, "episodes per algorithm (default 100000)");
    cmp->add_option("--map", opt.map, "4x4 | 8x8 | path to a map file")->required();
    cmp->add_flag("--no-slippery", opt.no_slippery, "deterministic transitions");
    cmp->add_option("--seed", opt.seed, "root seed shared by all runs")->required();
    cmp->add_option("--out", opt.out_dir, "output directory")->required();
    add_hyperparameter_flags(cmp, opt);

    CLI::App* oracle = app.add_subcommand("oracle", "exact DP values, policy and p* for a map");
    oracle->add_option("--map", opt.map, "4x4 | 8x8 | path to a map file")->required();
    oracle->add_flag("--no-slippery", opt.no_slippery, "deterministic transitions");
    oracle->add_option("--gamma", opt.oracle_gamma, "discount for value iteration");
    oracle->add_option("--horizon", opt.horizon, "step budget for the success probability");
    oracle->add_option("--csv", opt.oracle_csv_path, "also dump state,value,action CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(opt);
        if (cmp->parsed()) return cmd_compare(opt);
        if (oracle->parsed()) return cmd_oracle(opt);
    } catch (const flbench::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const flbench::MalformedMap& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
