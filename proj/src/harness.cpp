#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "neatnc/harness.hpp"
#include "neatnc/network.hpp"
#include "neatnc/scenario_io.hpp"

namespace neatnc {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kGenomeSchema = "neatnc-genome/1";
constexpr const char* kMetricsHeader =
    "run,seed,algorithm,scenario,fitness,path_length,path_length_success,success,terminal,steps,"
    "r_goal,r_disp,r_smooth,r_collision,r_see";

std::string run_dir_name(std::size_t run) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu", run);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(out.good(), "cannot write " + path.string());
        out << text;
    }
    fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) rows.push_back(split(line, ','));
    }
    return rows;
}

double parse_double(const std::string& s) {
    if (s.empty()) return std::nan("");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc{} && ptr == s.data() + s.size(), "malformed number '" + s + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    require(ec == std::errc{} && ptr == s.data() + s.size(), "malformed integer '" + s + "'");
    return v;
}

Terminal terminal_from_string(const std::string& s) {
    if (s == "collided") return Terminal::collided;
    if (s == "reached_goal") return Terminal::reached_goal;
    if (s == "truncated") return Terminal::truncated;
    throw ContractError("unknown terminal event '" + s + "'");
}

template <typename T>
void override_field(const json& obj, const char* key, T& field) {
    if (obj.contains(key)) field = obj.at(key).get<T>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    require(obj.is_object(), where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        const bool ok = std::any_of(known.begin(), known.end(), [&](const char* k) { return key == k; });
        require(ok, where + ": unknown key '" + key + "'");
    }
}

json evolution_to_json(const EvolutionConfig& c) {
    return {{"population_size", c.population_size},
            {"generations", c.generations},
            {"elitism", c.elitism},
            {"conn_add_rate", c.conn_add_rate},
            {"conn_delete_rate", c.conn_delete_rate},
            {"node_add_rate", c.node_add_rate},
            {"node_delete_rate", c.node_delete_rate},
            {"weight_mutate_rate", c.weight_mutate_rate},
            {"weight_perturb_sigma", c.weight_perturb_sigma},
            {"weight_replace_rate", c.weight_replace_rate},
            {"weight_limit", c.weight_limit},
            {"disable_inherit_prob", c.disable_inherit_prob},
            {"c1_excess", c.c1_excess},
            {"c2_disjoint", c.c2_disjoint},
            {"c3_weight", c.c3_weight},
            {"compatibility_threshold", c.compatibility_threshold},
            {"survival_fraction", c.survival_fraction}};
}

void evolution_from_json(const json& obj, EvolutionConfig& c) {
    // Input arity and recurrence follow from the algorithm and are not configurable.
    reject_unknown_keys(obj,
                        {"population_size", "generations", "elitism", "conn_add_rate", "conn_delete_rate",
                         "node_add_rate", "node_delete_rate", "weight_mutate_rate", "weight_perturb_sigma",
                         "weight_replace_rate", "weight_limit", "disable_inherit_prob", "c1_excess", "c2_disjoint",
                         "c3_weight", "compatibility_threshold", "survival_fraction"},
                        "evolution");
    override_field(obj, "population_size", c.population_size);
    override_field(obj, "generations", c.generations);
    override_field(obj, "elitism", c.elitism);
    override_field(obj, "conn_add_rate", c.conn_add_rate);
    override_field(obj, "conn_delete_rate", c.conn_delete_rate);
    override_field(obj, "node_add_rate", c.node_add_rate);
    override_field(obj, "node_delete_rate", c.node_delete_rate);
    override_field(obj, "weight_mutate_rate", c.weight_mutate_rate);
    override_field(obj, "weight_perturb_sigma", c.weight_perturb_sigma);
    override_field(obj, "weight_replace_rate", c.weight_replace_rate);
    override_field(obj, "weight_limit", c.weight_limit);
    override_field(obj, "disable_inherit_prob", c.disable_inherit_prob);
    override_field(obj, "c1_excess", c.c1_excess);
    override_field(obj, "c2_disjoint", c.c2_disjoint);
    override_field(obj, "c3_weight", c.c3_weight);
    override_field(obj, "compatibility_threshold", c.compatibility_threshold);
    override_field(obj, "survival_fraction", c.survival_fraction);
}

std::string metrics_row(const RunMetrics& m, const ExperimentConfig& config) {
    std::ostringstream row;
    row << m.run << ',' << m.seed << ',' << to_string(config.algorithm) << ',' << config.scenario.name << ','
        << format_number(m.fitness) << ',' << format_number(m.path_length) << ','
        << (m.success ? format_number(m.path_length) : std::string{}) << ',' << (m.success ? 1 : 0) << ','
        << to_string(m.terminal) << ',' << m.steps << ',' << format_number(m.reward.r_goal) << ','
        << format_number(m.reward.r_disp) << ',' << format_number(m.reward.r_smooth) << ','
        << format_number(m.reward.r_collision) << ',' << format_number(m.reward.r_see) << '\n';
    return row.str();
}

RunMetrics metrics_from_row(const std::vector<std::string>& cells) {
    require(cells.size() >= 15, "metrics row has too few columns");
    RunMetrics m;
    m.run = static_cast<std::size_t>(parse_u64(cells[0]));
    m.seed = parse_u64(cells[1]);
    m.fitness = parse_double(cells[4]);
    m.path_length = parse_double(cells[5]);
    m.success = cells[7] == "1";
    m.terminal = terminal_from_string(cells[8]);
    m.steps = static_cast<std::size_t>(parse_u64(cells[9]));
    m.reward = {parse_double(cells[10]), parse_double(cells[11]), parse_double(cells[12]),
                parse_double(cells[13]), parse_double(cells[14]), m.fitness};
    return m;
}

std::string generations_csv(const std::vector<GenerationStats>& log) {
    std::ostringstream out;
    out << "generation,best_fitness,mean_fitness,species_count\n";
    for (const auto& g : log)
        out << g.generation << ',' << format_number(g.best_fitness) << ',' << format_number(g.mean_fitness) << ','
            << g.species_count << '\n';
    return out.str();
}

std::vector<GenerationStats> generations_from_csv(const fs::path& path) {
    std::vector<GenerationStats> log;
    const auto rows = read_csv(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        require(rows[i].size() == 4, "malformed generations row in " + path.string());
        log.push_back({static_cast<std::size_t>(parse_u64(rows[i][0])), parse_double(rows[i][1]),
                       parse_double(rows[i][2]), static_cast<std::size_t>(parse_u64(rows[i][3]))});
    }
    return log;
}

RunMetrics load_run_metrics(const fs::path& run_dir) {
    const auto rows = read_csv(run_dir / "metrics.csv");
    require(rows.size() == 2, "run metrics file must hold exactly one row: " + run_dir.string());
    RunMetrics m = metrics_from_row(rows[1]);
    if (fs::exists(run_dir / "timing.csv")) {
        const auto timing = read_csv(run_dir / "timing.csv");
        if (timing.size() == 2 && timing[1].size() == 2) m.wall_time_s = parse_double(timing[1][1]);
    }
    if (fs::exists(run_dir / "generations.csv")) m.log = generations_from_csv(run_dir / "generations.csv");
    return m;
}

void write_aggregates(const std::vector<std::optional<RunMetrics>>& done, const ExperimentConfig& config,
                      const fs::path& out_dir) {
    std::ostringstream metrics, timing;
    metrics << kMetricsHeader << '\n';
    timing << "run,wall_time_s\n";
    for (const auto& m : done) {
        if (!m) continue;
        metrics << metrics_row(*m, config);
        timing << m->run << ',' << format_number(m->wall_time_s) << '\n';
    }
    write_text(out_dir / "metrics.csv", metrics.str());
    write_text(out_dir / "timing.csv", timing.str());
}

double mean(const std::vector<double>& v) {
    if (v.empty()) return std::nan("");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double median(std::vector<double> v) {
    if (v.empty()) return std::nan("");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string matrix_csv(const stats::DunnResult& dunn, const std::vector<std::vector<double>>& m) {
    std::ostringstream out;
    out << "group";
    for (const auto& l : dunn.labels) out << ',' << l;
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << dunn.labels[i];
        for (double v : m[i]) out << ',' << format_number(v);
        out << '\n';
    }
    return out.str();
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string{};
}

std::string to_string(Algorithm algorithm) {
    return algorithm == Algorithm::neat_nc ? "neat_nc" : "vanilla_neat";
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "neat_nc" || name == "neat-nc") return Algorithm::neat_nc;
    if (name == "vanilla_neat" || name == "vanilla" || name == "neat") return Algorithm::vanilla_neat;
    throw ContractError("unknown algorithm '" + name + "' (expected neat_nc or vanilla_neat)");
}

EncoderMode encoder_mode(Algorithm algorithm) {
    return algorithm == Algorithm::neat_nc ? EncoderMode::nav_cells : EncoderMode::radar;
}

ExperimentConfig ExperimentConfig::defaults(Algorithm algorithm, const fs::path& scenario_path) {
    ExperimentConfig c;
    c.algorithm = algorithm;
    c.evolution = algorithm == Algorithm::neat_nc ? EvolutionConfig::neat_nc() : EvolutionConfig::vanilla();
    c.scenario_path = scenario_path;
    c.scenario = load_scenario(scenario_path);
    return c;
}

void ExperimentConfig::validate() const {
    require(runs >= 1, "runs must be at least 1");
    scenario.validate();
    evolution.validate();
    fitness.validate();
    kinematics.validate();
    const std::size_t inputs = algorithm == Algorithm::neat_nc ? kNavInputs : kRadarInputs;
    require(evolution.num_inputs == inputs && evolution.num_outputs == kControlOutputs,
            "evolution arity does not match the algorithm");
    require(evolution.allow_recurrent == (algorithm == Algorithm::neat_nc),
            "only the navigation-cell variant may evolve recurrent connections");
}

ExperimentConfig config_from_json(const json& doc, const fs::path& base_dir) {
    require(doc.is_object(), "experiment config must be a JSON object");
    const Algorithm algorithm = algorithm_from_string(doc.value("algorithm", std::string{"neat_nc"}));

    ExperimentConfig c;
    c.algorithm = algorithm;
    c.evolution = algorithm == Algorithm::neat_nc ? EvolutionConfig::neat_nc() : EvolutionConfig::vanilla();
    try {
        reject_unknown_keys(doc, {"algorithm", "scenario", "evolution", "fitness", "kinematics", "runs", "master_seed"},
                            "experiment config");
        require(doc.contains("scenario"), "experiment config: missing 'scenario'");
        const json& scenario = doc.at("scenario");
        if (scenario.is_string()) {
            c.scenario_path = scenario.get<std::string>();
            if (c.scenario_path.is_relative()) c.scenario_path = base_dir / c.scenario_path;
            c.scenario = load_scenario(c.scenario_path);
        } else {
            c.scenario = scenario_from_json(scenario);
        }
        if (doc.contains("evolution")) evolution_from_json(doc.at("evolution"), c.evolution);
        if (doc.contains("fitness")) {
            const auto& f = doc.at("fitness");
            reject_unknown_keys(f, {"lambda_omega", "lambda_collision", "lambda_goal", "lambda_time", "lambda_see", "t_max"},
                                "fitness");
            override_field(f, "lambda_omega", c.fitness.lambda_omega);
            override_field(f, "lambda_collision", c.fitness.lambda_collision);
            override_field(f, "lambda_goal", c.fitness.lambda_goal);
            override_field(f, "lambda_time", c.fitness.lambda_time);
            override_field(f, "lambda_see", c.fitness.lambda_see);
            override_field(f, "t_max", c.fitness.t_max);
        }
        if (doc.contains("kinematics")) {
            reject_unknown_keys(doc.at("kinematics"), {"v_max", "omega_max"}, "kinematics");
            override_field(doc.at("kinematics"), "v_max", c.kinematics.v_max);
            override_field(doc.at("kinematics"), "omega_max", c.kinematics.omega_max);
        }
        override_field(doc, "runs", c.runs);
        override_field(doc, "master_seed", c.master_seed);
    } catch (const json::exception& e) {
        throw ContractError(std::string("experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    return {{"algorithm", to_string(c.algorithm)},
            {"scenario", scenario_to_json(c.scenario)},
            {"runs", c.runs},
            {"master_seed", c.master_seed},
            {"evolution", evolution_to_json(c.evolution)},
            {"fitness",
             {{"lambda_omega", c.fitness.lambda_omega},
              {"lambda_collision", c.fitness.lambda_collision},
              {"lambda_goal", c.fitness.lambda_goal},
              {"lambda_time", c.fitness.lambda_time},
              {"lambda_see", c.fitness.lambda_see},
              {"t_max", c.fitness.t_max}}},
            {"kinematics", {{"v_max", c.kinematics.v_max}, {"omega_max", c.kinematics.omega_max}}}};
}

ExperimentConfig load_config(const fs::path& path) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::exception& e) {
        throw ContractError("config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc, path.parent_path());
}

Evaluation evaluate_genome(const Genome& genome, const Scenario& scenario, Algorithm algorithm,
                           const FitnessConfig& fitness, const Kinematics& kinematics) {
    Controller controller;
    if (algorithm == Algorithm::neat_nc) {
        auto net = std::make_shared<RecurrentNetwork>(build_recurrent(genome, kNavInputs));
        net->reset_state();
        controller = [net](std::span<const double> obs) {
            const auto out = net->activate(obs);
            return Action{out.angular, out.linear};
        };
    } else {
        auto net = std::make_shared<FeedforwardNetwork>(build_feedforward(genome, kRadarInputs));
        controller = [net](std::span<const double> obs) {
            const auto out = net->activate(obs);
            return Action{out.angular, out.linear};
        };
    }
    Evaluation e;
    e.episode = run_episode(scenario, controller, encoder_mode(algorithm), fitness.t_max, kinematics);
    e.reward = score_episode(e.episode, scenario.goal.position, fitness);
    return e;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t run_index) {
    return master_seed ^ static_cast<std::uint64_t>(run_index);
}

RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed, std::size_t run_index) {
    config.validate();
    Rng rng(seed);
    const auto evaluator = [&](std::span<const Genome> population) {
        std::vector<double> scores;
        scores.reserve(population.size());
        for (const auto& g : population)
            scores.push_back(
                evaluate_genome(g, config.scenario, config.algorithm, config.fitness, config.kinematics).fitness());
        return scores;
    };

    const auto started = std::chrono::steady_clock::now();
    EvolutionResult evolved = evolve(config.evolution, evaluator, rng);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    RunRecord record;
    record.best = std::move(evolved.best);
    record.evaluation =
        evaluate_genome(record.best, config.scenario, config.algorithm, config.fitness, config.kinematics);
    auto& m = record.metrics;
    m.run = run_index;
    m.seed = seed;
    m.fitness = record.evaluation.fitness();
    m.path_length = path_length(record.evaluation.episode.trajectory);
    m.wall_time_s = elapsed;
    m.success = record.evaluation.success();
    m.terminal = record.evaluation.episode.terminal;
    m.steps = record.evaluation.episode.steps_used();
    m.reward = record.evaluation.reward;
    m.log = std::move(evolved.log);
    return record;
}

std::string trajectory_csv(const Evaluation& evaluation, const Scenario& scenario, const FitnessConfig& fitness) {
    const auto& traj = evaluation.episode.trajectory;
    const auto& steps = evaluation.episode.steps;
    std::ostringstream out;
    out << "t,x,y,theta,v,reward\n";
    for (std::size_t t = 0; t < traj.size(); ++t) {
        double reward = 0.0;
        if (t > 0) {
            const auto& rec = steps[t - 1];
            reward = step_reward(traj[t - 1], traj[t], scenario.goal.position, rec.omega, rec.events.in_see_zone,
                                 fitness);
            if (t == steps.size())
                reward += terminal_reward(evaluation.episode.terminal, evaluation.episode.steps_used(), fitness);
        }
        out << t << ',' << format_number(traj[t].x) << ',' << format_number(traj[t].y) << ','
            << format_number(traj[t].theta) << ',' << format_number(traj[t].v) << ',' << format_number(reward)
            << '\n';
    }
    return out.str();
}

void write_run(const RunRecord& record, const ExperimentConfig& config, const fs::path& run_dir) {
    fs::create_directories(run_dir);
    write_text(run_dir / "best_genome.json", genome_to_json(record.best).dump(2) + "\n");
    write_text(run_dir / "generations.csv", generations_csv(record.metrics.log));
    write_text(run_dir / "trajectory.csv", trajectory_csv(record.evaluation, config.scenario, config.fitness));
    write_text(run_dir / "timing.csv",
               "run,wall_time_s\n" + std::to_string(record.metrics.run) + "," +
                   format_number(record.metrics.wall_time_s) + "\n");
    // metrics.csv goes last: its presence marks the run as complete.
    write_text(run_dir / "metrics.csv", std::string(kMetricsHeader) + "\n" + metrics_row(record.metrics, config));
}

std::vector<RunMetrics> run_experiment(const ExperimentConfig& config, const fs::path& out_dir, std::size_t jobs,
                                       const ProgressCallback& progress) {
    config.validate();
    fs::create_directories(out_dir);
    const std::string config_text = config_to_json(config).dump(2) + "\n";
    const fs::path config_path = out_dir / "config.json";
    if (fs::exists(config_path))
        require(read_text(config_path) == config_text,
                "output directory " + out_dir.string() + " holds results for a different configuration");
    else
        write_text(config_path, config_text);

    std::vector<std::optional<RunMetrics>> done(config.runs);
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < config.runs; ++i) {
        const fs::path run_dir = out_dir / run_dir_name(i);
        if (fs::exists(run_dir / "metrics.csv")) done[i] = load_run_metrics(run_dir);
        else todo.push_back(i);
    }

    std::mutex mutex;
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = cursor.fetch_add(1);
            if (k >= todo.size()) return;
            const std::size_t run = todo[k];
            try {
                const RunRecord record = run_single(config, run_seed(config.master_seed, run), run);
                write_run(record, config, out_dir / run_dir_name(run));
                std::lock_guard lock(mutex);
                done[run] = record.metrics;
                write_aggregates(done, config, out_dir);
                if (progress) progress(record.metrics);
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                cursor = todo.size();
                return;
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, todo.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    write_aggregates(done, config, out_dir);
    std::vector<RunMetrics> result;
    for (auto& m : done) result.push_back(std::move(*m));
    return result;
}

json genome_to_json(const Genome& genome) {
    json doc;
    doc["schema"] = kGenomeSchema;
    doc["id"] = genome.id;
    doc["fitness"] = genome.fitness ? json(*genome.fitness) : json(nullptr);
    doc["nodes"] = json::array();
    for (const auto& n : genome.nodes)
        doc["nodes"].push_back(
            {{"id", n.id}, {"kind", to_string(n.kind)}, {"activation", to_string(n.activation)}, {"bias", n.bias}});
    doc["connections"] = json::array();
    for (const auto& c : genome.connections)
        doc["connections"].push_back({{"innovation", c.innovation},
                                      {"source", c.source},
                                      {"target", c.target},
                                      {"weight", c.weight},
                                      {"enabled", c.enabled}});
    return doc;
}

Genome genome_from_json(const json& doc) {
    try {
        require(doc.value("schema", std::string{}) == kGenomeSchema, "genome: unsupported schema");
        Genome g;
        g.id = doc.value("id", std::uint64_t{0});
        if (doc.contains("fitness") && !doc.at("fitness").is_null()) g.fitness = doc.at("fitness").get<double>();
        for (const auto& n : doc.at("nodes"))
            g.nodes.push_back({n.at("id").get<int>(), node_kind_from_string(n.at("kind").get<std::string>()),
                               activation_from_string(n.at("activation").get<std::string>()),
                               n.at("bias").get<double>()});
        for (const auto& c : doc.at("connections"))
            g.connections.push_back({c.at("innovation").get<int>(), c.at("source").get<int>(),
                                     c.at("target").get<int>(), c.at("weight").get<double>(),
                                     c.at("enabled").get<bool>()});
        g.sort_genes();
        return g;
    } catch (const json::exception& e) {
        throw ContractError(std::string("genome: ") + e.what());
    }
}

void export_trajectory(const fs::path& run_dir, const fs::path& destination) {
    require(fs::is_directory(run_dir) && fs::exists(run_dir / "best_genome.json"),
            "unknown run: " + run_dir.string());
    fs::path config_path = run_dir / "config.json";
    if (!fs::exists(config_path)) config_path = run_dir.parent_path() / "config.json";
    require(fs::exists(config_path), "no config.json found for run " + run_dir.string());

    const ExperimentConfig config = load_config(config_path);
    const Genome genome = genome_from_json(json::parse(read_text(run_dir / "best_genome.json")));
    const Evaluation evaluation =
        evaluate_genome(genome, config.scenario, config.algorithm, config.fitness, config.kinematics);
    write_text(destination, trajectory_csv(evaluation, config.scenario, config.fitness));
    write_text(destination.string() + ".scenario.json", scenario_to_json(config.scenario).dump(2) + "\n");
}

ResultSet load_results(const fs::path& dir) {
    require(fs::exists(dir / "metrics.csv") && fs::exists(dir / "config.json"),
            "not a results directory: " + dir.string());
    const json config = json::parse(read_text(dir / "config.json"));
    ResultSet set;
    set.label = config.value("algorithm", dir.filename().string());
    set.scenario = config.at("scenario");
    set.scenario_name = set.scenario.value("name", std::string{});

    const auto rows = read_csv(dir / "metrics.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) set.runs.push_back(metrics_from_row(rows[i]));
    if (fs::exists(dir / "timing.csv")) {
        const auto timing = read_csv(dir / "timing.csv");
        for (std::size_t i = 1; i < timing.size(); ++i) {
            const auto run = static_cast<std::size_t>(parse_u64(timing[i][0]));
            for (auto& m : set.runs)
                if (m.run == run) m.wall_time_s = parse_double(timing[i][1]);
        }
    }
    require(!set.runs.empty(), "results directory holds no runs: " + dir.string());
    return set;
}

CompareReport compare(const std::vector<ResultSet>& results, double alpha) {
    require(results.size() >= 2, "compare needs at least two result sets");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    for (const auto& r : results)
        require(r.scenario == results.front().scenario,
                "result sets come from different scenarios ('" + results.front().scenario_name + "' vs '" +
                    r.scenario_name + "')");

    // Disambiguate repeated labels, e.g. a set compared against itself.
    std::vector<std::string> labels;
    for (const auto& r : results) {
        std::string label = r.label;
        for (int k = 2; std::find(labels.begin(), labels.end(), label) != labels.end(); ++k)
            label = r.label + "#" + std::to_string(k);
        labels.push_back(label);
    }

    std::vector<stats::SampleGroup> fitness_groups, path_groups;
    std::vector<std::size_t> successes, trials;
    for (std::size_t i = 0; i < results.size(); ++i) {
        stats::SampleGroup f{labels[i], {}}, p{labels[i], {}};
        std::size_t wins = 0;
        for (const auto& m : results[i].runs) {
            f.values.push_back(m.fitness);
            p.values.push_back(m.path_length);
            if (m.success) ++wins;
        }
        fitness_groups.push_back(std::move(f));
        path_groups.push_back(std::move(p));
        successes.push_back(wins);
        trials.push_back(results[i].runs.size());
    }

    CompareReport report;
    const auto kw_fitness = stats::kruskal_wallis(fitness_groups);
    const auto kw_path = stats::kruskal_wallis(path_groups);
    report.omnibus.push_back({"fitness", kw_fitness, kw_fitness.p_value < alpha, false});
    report.omnibus.push_back({"path_length", kw_path, kw_path.p_value < alpha, false});

    OmnibusRow success_row{"success", {}, false, false};
    try {
        success_row.result = stats::chi_square_success(successes, trials);
        success_row.significant = success_row.result.p_value < alpha;
    } catch (const ContractError&) {
        // All runs succeeded or all failed: rates are identical.
        success_row.result = {0.0, static_cast<int>(results.size()) - 1, 1.0};
        success_row.degenerate = true;
    }
    report.omnibus.push_back(success_row);

    if (report.omnibus[0].significant) report.dunn_fitness = stats::dunn_posthoc(fitness_groups);
    if (report.omnibus[1].significant) report.dunn_path = stats::dunn_posthoc(path_groups);

    const auto fitness_dunn = report.dunn_fitness ? *report.dunn_fitness : stats::dunn_posthoc(fitness_groups);
    const auto path_dunn = report.dunn_path ? *report.dunn_path : stats::dunn_posthoc(path_groups);
    for (std::size_t i = 0; i < results.size(); ++i) {
        ReportRow row;
        row.label = labels[i];
        row.runs = results[i].runs.size();
        std::vector<double> path_success, times;
        for (const auto& m : results[i].runs) {
            if (m.success) path_success.push_back(m.path_length);
            times.push_back(m.wall_time_s);
        }
        row.mean_fitness = mean(fitness_groups[i].values);
        row.median_fitness = median(fitness_groups[i].values);
        row.fitness_mean_rank = fitness_dunn.mean_ranks[i];
        row.mean_path = mean(path_groups[i].values);
        row.mean_path_success = mean(path_success);
        row.median_path = median(path_groups[i].values);
        row.path_mean_rank = path_dunn.mean_ranks[i];
        row.success_rate = static_cast<double>(successes[i]) / static_cast<double>(trials[i]);
        row.mean_time_s = mean(times);
        report.rows.push_back(row);
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const ReportRow& a, const ReportRow& b) { return a.fitness_mean_rank > b.fitness_mean_rank; });
    return report;
}

void write_report(const CompareReport& report, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::ostringstream rows;
    rows << "group,runs,mean_fitness,median_fitness,fitness_mean_rank,mean_path,mean_path_success,median_path,"
            "path_mean_rank,success_rate,mean_time_s\n";
    for (const auto& r : report.rows)
        rows << r.label << ',' << r.runs << ',' << format_number(r.mean_fitness) << ','
             << format_number(r.median_fitness) << ',' << format_number(r.fitness_mean_rank) << ','
             << format_number(r.mean_path) << ',' << format_number(r.mean_path_success) << ','
             << format_number(r.median_path) << ',' << format_number(r.path_mean_rank) << ','
             << format_number(r.success_rate) << ',' << format_number(r.mean_time_s) << '\n';
    write_text(out_dir / "report.csv", rows.str());

    std::ostringstream omnibus;
    omnibus << "metric,test,statistic,df,p_value,significant,degenerate\n";
    for (const auto& o : report.omnibus)
        omnibus << o.metric << ',' << (o.metric == "success" ? "chi_square" : "kruskal_wallis") << ','
                << format_number(o.result.statistic) << ',' << o.result.degrees_of_freedom << ','
                << format_number(o.result.p_value) << ',' << (o.significant ? 1 : 0) << ','
                << (o.degenerate ? 1 : 0) << '\n';
    write_text(out_dir / "omnibus.csv", omnibus.str());

    auto dunn_files = [&](const std::optional<stats::DunnResult>& dunn, const std::string& metric) {
        if (!dunn) return;
        write_text(out_dir / ("dunn_" + metric + "_p_adjusted.csv"), matrix_csv(*dunn, dunn->p_adjusted));
        write_text(out_dir / ("dunn_" + metric + "_p_raw.csv"), matrix_csv(*dunn, dunn->p_raw));
        std::ostringstream ranks;
        ranks << "group,mean_rank\n";
        for (std::size_t i : stats::rank_order(dunn->mean_ranks, metric == "fitness"))
            ranks << dunn->labels[i] << ',' << format_number(dunn->mean_ranks[i]) << '\n';
        write_text(out_dir / ("dunn_" + metric + "_ranks.csv"), ranks.str());
    };
    dunn_files(report.dunn_fitness, "fitness");
    dunn_files(report.dunn_path, "path");
}

}  // namespace neatnc
