#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "neatnc/environment.hpp"
#include "neatnc/fitness.hpp"
#include "neatnc/neat.hpp"
#include "neatnc/stats.hpp"

namespace neatnc {

enum class Algorithm { neat_nc, vanilla_neat };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);
EncoderMode encoder_mode(Algorithm algorithm);

struct ExperimentConfig {
    std::filesystem::path scenario_path;
    Scenario scenario;
    Algorithm algorithm = Algorithm::neat_nc;
    EvolutionConfig evolution = EvolutionConfig::neat_nc();
    FitnessConfig fitness;
    Kinematics kinematics;
    std::size_t runs = 30;
    std::uint64_t master_seed = 0;

    /// Default parameters for the chosen algorithm, with the scenario loaded.
    static ExperimentConfig defaults(Algorithm algorithm, const std::filesystem::path& scenario_path);

    void validate() const;
};

/// Reads the experiment JSON. Relative scenario paths resolve against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);
/// Serializes the resolved config; the scenario is embedded inline.
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

struct Evaluation {
    RewardBreakdown reward;
    Episode episode;

    [[nodiscard]] double fitness() const { return reward.total; }
    [[nodiscard]] bool success() const { return episode.terminal == Terminal::reached_goal; }
};

/// Builds the phenotype for the algorithm, runs one episode from a fresh
/// state, and scores it. Throws ContractError on an arity mismatch.
Evaluation evaluate_genome(const Genome& genome, const Scenario& scenario, Algorithm algorithm,
                           const FitnessConfig& fitness, const Kinematics& kinematics);

struct RunMetrics {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    double fitness = 0.0;
    double path_length = 0.0;
    double wall_time_s = 0.0;
    bool success = false;
    Terminal terminal = Terminal::truncated;
    std::size_t steps = 0;
    RewardBreakdown reward;
    std::vector<GenerationStats> log;
};

struct RunRecord {
    RunMetrics metrics;
    Genome best;
    Evaluation evaluation;
};

/// Seed of run i: master XOR i.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index);

/// One full evolution with a fixed seed. Wall time covers the evolution loop only.
RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed, std::size_t run_index = 0);

/// Writes a run directory: best_genome.json, generations.csv, trajectory.csv, metrics.csv.
void write_run(const RunRecord& record, const ExperimentConfig& config, const std::filesystem::path& run_dir);

using ProgressCallback = std::function<void(const RunMetrics&)>;

/// Runs config.runs independent evolutions into out_dir. Runs that already
/// finished in out_dir are loaded instead of recomputed. Aggregate files
/// (metrics.csv, timing.csv) are rebuilt after every completed run.
std::vector<RunMetrics> run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                       std::size_t jobs = 1, const ProgressCallback& progress = {});

/// Trajectory rows t,x,y,theta,v,reward; the last row's reward includes the terminal term.
std::string trajectory_csv(const Evaluation& evaluation, const Scenario& scenario, const FitnessConfig& fitness);

/// Re-simulates the stored best genome of `run_dir` and writes the trajectory
/// to `destination` plus a `<destination>.scenario.json` geometry sidecar.
void export_trajectory(const std::filesystem::path& run_dir, const std::filesystem::path& destination);

nlohmann::json genome_to_json(const Genome& genome);
Genome genome_from_json(const nlohmann::json& doc);

struct ResultSet {
    std::string label;
    std::string scenario_name;
    nlohmann::json scenario;
    std::vector<RunMetrics> runs;
};

/// Loads metrics.csv, timing.csv and config.json from a bench directory.
ResultSet load_results(const std::filesystem::path& dir);

struct OmnibusRow {
    std::string metric;
    stats::TestResult result;
    bool significant = false;
    bool degenerate = false;
};

struct ReportRow {
    std::string label;
    std::size_t runs = 0;
    double mean_fitness = 0.0;
    double median_fitness = 0.0;
    double fitness_mean_rank = 0.0;
    double mean_path = 0.0;
    double mean_path_success = 0.0;  // NaN when no run succeeded
    double median_path = 0.0;
    double path_mean_rank = 0.0;
    double success_rate = 0.0;
    double mean_time_s = 0.0;
};

struct CompareReport {
    std::vector<ReportRow> rows;  // best fitness mean rank first
    std::vector<OmnibusRow> omnibus;
    std::optional<stats::DunnResult> dunn_fitness;
    std::optional<stats::DunnResult> dunn_path;
};

CompareReport compare(const std::vector<ResultSet>& results, double alpha = 0.05);
/// Writes report.csv, omnibus.csv and dunn_*.csv matrices into out_dir.
void write_report(const CompareReport& report, const std::filesystem::path& out_dir);

/// Shortest round-trip decimal form used by every CSV writer.
std::string format_number(double value);

}  // namespace neatnc
