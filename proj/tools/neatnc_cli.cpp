// Command-line front end: evolve, bench, compare, export, validate.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "neatnc/harness.hpp"
#include "neatnc/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace neatnc;

namespace {

fs::path default_out_dir(const std::string& leaf) {
    const char* env = std::getenv("NEATNC_OUT_DIR");
    return fs::path(env != nullptr && *env != '\0' ? env : "neatnc_out") / leaf;
}

ExperimentConfig resolve_config(const std::string& config_path, const std::string& scenario, const std::string& algo) {
    if (!config_path.empty()) {
        ExperimentConfig c = load_config(config_path);
        if (!algo.empty() && algorithm_from_string(algo) != c.algorithm) {
            // Switching algorithm resets the algorithm-specific defaults.
            ExperimentConfig d = ExperimentConfig::defaults(algorithm_from_string(algo), c.scenario_path);
            d.scenario = c.scenario;
            d.fitness = c.fitness;
            d.kinematics = c.kinematics;
            d.runs = c.runs;
            d.master_seed = c.master_seed;
            d.evolution.population_size = c.evolution.population_size;
            d.evolution.generations = c.evolution.generations;
            c = d;
        }
        if (!scenario.empty()) {
            c.scenario_path = scenario;
            c.scenario = load_scenario(scenario);
        }
        return c;
    }
    require(!scenario.empty(), "either --config or --scenario is required");
    return ExperimentConfig::defaults(algo.empty() ? Algorithm::neat_nc : algorithm_from_string(algo), scenario);
}

void print_metrics(const RunMetrics& m) {
    std::cout << "run " << m.run << " seed " << m.seed << ": fitness " << format_number(m.fitness) << ", path "
              << format_number(m.path_length) << ", " << to_string(m.terminal) << " after " << m.steps
              << " steps, " << format_number(m.wall_time_s) << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neuroevolution navigation with navigation-cell inputs"};
    app.require_subcommand(1);

    std::string config_path, scenario_path, algo, out;
    std::uint64_t seed = 0;
    std::size_t generations = 0;
    bool override_generations = false;

    auto* evolve_cmd = app.add_subcommand("evolve", "Run one evolution and write its run directory");
    evolve_cmd->add_option("--config", config_path, "Experiment config (JSON)");
    evolve_cmd->add_option("--scenario", scenario_path, "Scenario file (JSON)");
    evolve_cmd->add_option("--algo", algo, "neat_nc or vanilla_neat");
    evolve_cmd->add_option("--seed", seed, "Random seed")->default_val(0);
    evolve_cmd->add_option("--generations", generations, "Override the number of generations")
        ->each([&](const std::string&) { override_generations = true; });
    evolve_cmd->add_option("--out", out, "Output run directory");

    std::size_t runs = 0, jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t master_seed = 0;
    bool override_runs = false, override_master = false;
    auto* bench_cmd = app.add_subcommand("bench", "Run many seeded evolutions (resumable)");
    bench_cmd->add_option("--config", config_path, "Experiment config (JSON)");
    bench_cmd->add_option("--scenario", scenario_path, "Scenario file (JSON)");
    bench_cmd->add_option("--algo", algo, "neat_nc or vanilla_neat");
    bench_cmd->add_option("--runs", runs, "Number of runs")->each([&](const std::string&) { override_runs = true; });
    bench_cmd->add_option("--master-seed", master_seed, "Master seed; run i uses master XOR i")
        ->each([&](const std::string&) { override_master = true; });
    bench_cmd->add_option("--generations", generations, "Override the number of generations")
        ->each([&](const std::string&) { override_generations = true; });
    bench_cmd->add_option("--jobs", jobs, "Concurrent runs");
    bench_cmd->add_option("--out", out, "Output directory");

    std::vector<std::string> inputs;
    double alpha = 0.05;
    auto* compare_cmd = app.add_subcommand("compare", "Statistical comparison of bench result directories");
    compare_cmd->add_option("--inputs", inputs, "Two or more bench directories")->required()->expected(2, -1);
    compare_cmd->add_option("--alpha", alpha, "Significance level")->default_val(0.05);
    compare_cmd->add_option("--out", out, "Report directory");

    std::string run_dir;
    auto* export_cmd = app.add_subcommand("export", "Re-simulate a run's best genome and export its trajectory");
    export_cmd->add_option("--run", run_dir, "Run directory (e.g. out/bench/run_000)")->required();
    export_cmd->add_option("--out", out, "Destination CSV")->required();

    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
    validate_cmd->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*evolve_cmd) {
            ExperimentConfig config = resolve_config(config_path, scenario_path, algo);
            if (override_generations) config.evolution.generations = generations;
            const fs::path dir = out.empty() ? default_out_dir("evolve") : fs::path(out);
            const RunRecord record = run_single(config, seed, 0);
            write_run(record, config, dir);
            std::ofstream(dir / "config.json") << config_to_json(config).dump(2) << "\n";
            print_metrics(record.metrics);
            std::cout << "wrote " << dir.string() << "\n";
        } else if (*bench_cmd) {
            ExperimentConfig config = resolve_config(config_path, scenario_path, algo);
            if (override_runs) config.runs = runs;
            if (override_master) config.master_seed = master_seed;
            if (override_generations) config.evolution.generations = generations;
            const fs::path dir = out.empty() ? default_out_dir("bench") : fs::path(out);
            const auto metrics = run_experiment(config, dir, jobs, print_metrics);
            std::size_t wins = 0;
            for (const auto& m : metrics) wins += m.success ? 1 : 0;
            std::cout << to_string(config.algorithm) << " on " << config.scenario.name << ": " << wins << "/"
                      << metrics.size() << " successful runs; results in " << dir.string() << "\n";
        } else if (*compare_cmd) {
            std::vector<ResultSet> sets;
            for (const auto& in : inputs) sets.push_back(load_results(in));
            const auto report = compare(sets, alpha);
            const fs::path dir = out.empty() ? default_out_dir("compare") : fs::path(out);
            write_report(report, dir);
            for (const auto& o : report.omnibus)
                std::cout << o.metric << ": statistic " << format_number(o.result.statistic) << ", p "
                          << format_number(o.result.p_value) << (o.significant ? " (significant)" : "") << "\n";
            std::cout << "ranking (best first):";
            for (const auto& r : report.rows) std::cout << " " << r.label;
            std::cout << "\nreport in " << dir.string() << "\n";
        } else if (*export_cmd) {
            export_trajectory(run_dir, out);
            std::cout << "wrote " << out << " and " << out << ".scenario.json\n";
        } else if (*validate_cmd) {
            const Scenario s = load_scenario(scenario_path);
            std::cout << "ok: " << (s.name.empty() ? scenario_path : s.name) << " (" << s.walls.size() << " walls, "
                      << s.obstacles.size() << " dynamic obstacles)\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
