// Python bindings. Genomes and configs cross the boundary as JSON text.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "neatnc/fitness.hpp"
#include "neatnc/harness.hpp"
#include "neatnc/nav_encoder.hpp"
#include "neatnc/scenario_io.hpp"
#include "neatnc/stats.hpp"

namespace py = pybind11;
using namespace neatnc;

namespace {

Vec2 to_vec(const std::pair<double, double>& p) { return {p.first, p.second}; }

py::dict events_dict(const StepEvents& e) {
    py::dict d;
    d["collided"] = e.collided;
    d["reached_goal"] = e.reached_goal;
    d["in_see_zone"] = e.in_see_zone;
    return d;
}

py::dict reward_dict(const RewardBreakdown& r) {
    py::dict d;
    d["r_goal"] = r.r_goal;
    d["r_disp"] = r.r_disp;
    d["r_smooth"] = r.r_smooth;
    d["r_collision"] = r.r_collision;
    d["r_see"] = r.r_see;
    d["total"] = r.total;
    return d;
}

py::list trajectory_list(const Episode& ep) {
    py::list out;
    for (const auto& s : ep.trajectory) out.append(py::make_tuple(s.x, s.y, s.theta, s.v));
    return out;
}

py::dict evaluation_dict(const Evaluation& e) {
    py::dict d;
    d["fitness"] = e.fitness();
    d["success"] = e.success();
    d["terminal"] = to_string(e.episode.terminal);
    d["steps"] = e.episode.steps_used();
    d["path_length"] = path_length(e.episode.trajectory);
    d["reward"] = reward_dict(e.reward);
    d["trajectory"] = trajectory_list(e.episode);
    return d;
}

stats::TestResult kw(const std::vector<std::vector<double>>& groups) {
    std::vector<stats::SampleGroup> g;
    for (std::size_t i = 0; i < groups.size(); ++i) g.push_back({std::to_string(i), groups[i]});
    return stats::kruskal_wallis(g);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Navigation-cell neuroevolution core";
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);

    py::class_<AgentState>(m, "AgentState")
        .def(py::init<double, double, double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0,
             py::arg("theta") = 0.0, py::arg("v") = 0.0)
        .def_readwrite("x", &AgentState::x)
        .def_readwrite("y", &AgentState::y)
        .def_readwrite("theta", &AgentState::theta)
        .def_readwrite("v", &AgentState::v)
        .def("__repr__", [](const AgentState& s) {
            return "AgentState(x=" + format_number(s.x) + ", y=" + format_number(s.y) +
                   ", theta=" + format_number(s.theta) + ", v=" + format_number(s.v) + ")";
        });

    py::class_<Scenario>(m, "Scenario")
        .def_readonly("name", &Scenario::name)
        .def_readonly("start", &Scenario::start)
        .def_property_readonly("goal", [](const Scenario& s) { return py::make_tuple(s.goal.position.x, s.goal.position.y); })
        .def_readonly("sensor_radius", &Scenario::sensor_radius)
        .def_property_readonly("obstacle_count", [](const Scenario& s) { return s.obstacles.size(); })
        .def("to_json", [](const Scenario& s) { return scenario_to_json(s).dump(); });

    m.def("load_scenario", [](const std::filesystem::path& p) { return load_scenario(p); }, py::arg("path"));
    m.def("scenario_from_json", [](const std::string& text) { return scenario_from_json(nlohmann::json::parse(text)); },
          py::arg("text"));

    m.def(
        "encode",
        [](const AgentState& agent, std::pair<double, double> goal, const std::vector<std::pair<double, double>>& points,
           double sensor_radius, double v_max) {
            std::vector<Vec2> pts;
            for (const auto& p : points) pts.push_back(to_vec(p));
            const EncoderConfig cfg{sensor_radius, v_max};
            cfg.validate();
            const auto v = encode(agent, to_vec(goal), pts, cfg);
            return std::vector<double>(v.begin(), v.end());
        },
        py::arg("agent"), py::arg("goal"), py::arg("points") = std::vector<std::pair<double, double>>{},
        py::arg("sensor_radius") = 120.0, py::arg("v_max") = 3.0);

    m.def(
        "grid_index",
        [](double x, double y, double sensor_radius) -> std::optional<std::pair<int, int>> {
            const auto c = grid_index({x, y}, EncoderConfig{sensor_radius, 3.0});
            if (!c) return std::nullopt;
            return std::make_pair(c->row, c->col);
        },
        py::arg("x"), py::arg("y"), py::arg("sensor_radius") = 120.0);

    m.def(
        "step",
        [](const Scenario& s, const AgentState& agent, double angular, double linear, std::int64_t t) {
            const auto out = step(s, agent, {angular, linear}, t);
            return py::make_tuple(out.state, events_dict(out.events), out.omega);
        },
        py::arg("scenario"), py::arg("agent"), py::arg("angular"), py::arg("linear"), py::arg("t") = 0);

    m.def(
        "obstacle_position",
        [](const Scenario& s, std::size_t index, std::int64_t t) {
            require(index < s.obstacles.size(), "obstacle index out of range");
            const Vec2 p = obstacle_position(s.obstacles[index], t);
            return py::make_tuple(p.x, p.y);
        },
        py::arg("scenario"), py::arg("index"), py::arg("t"));

    m.def(
        "radar_scan",
        [](const Scenario& s, const AgentState& agent, std::int64_t t, double sensor_radius) {
            const auto r = radar_scan(s, agent, t, sensor_radius);
            return std::vector<double>(r.begin(), r.end());
        },
        py::arg("scenario"), py::arg("agent"), py::arg("t") = 0, py::arg("sensor_radius") = 120.0);

    m.def(
        "step_reward",
        [](const AgentState& prev, const AgentState& curr, std::pair<double, double> goal, double omega, bool in_see_zone) {
            return step_reward(prev, curr, to_vec(goal), omega, in_see_zone, FitnessConfig{});
        },
        py::arg("prev"), py::arg("curr"), py::arg("goal"), py::arg("omega") = 0.0, py::arg("in_see_zone") = false);

    m.def(
        "terminal_reward",
        [](const std::string& event, std::size_t step) {
            Terminal t = Terminal::truncated;
            if (event == "collided") t = Terminal::collided;
            else if (event == "reached_goal") t = Terminal::reached_goal;
            else require(event == "truncated", "unknown terminal event '" + event + "'");
            return terminal_reward(t, step, FitnessConfig{});
        },
        py::arg("event"), py::arg("step"));

    py::class_<stats::TestResult>(m, "TestResult")
        .def_readonly("statistic", &stats::TestResult::statistic)
        .def_readonly("df", &stats::TestResult::degrees_of_freedom)
        .def_readonly("p_value", &stats::TestResult::p_value)
        .def("__repr__", [](const stats::TestResult& r) {
            return "TestResult(statistic=" + format_number(r.statistic) + ", df=" + std::to_string(r.degrees_of_freedom) +
                   ", p_value=" + format_number(r.p_value) + ")";
        });

    m.def("kruskal_wallis", &kw, py::arg("groups"));
    m.def(
        "chi_square_success",
        [](const std::vector<std::size_t>& successes, const std::vector<std::size_t>& trials) {
            return stats::chi_square_success(successes, trials);
        },
        py::arg("successes"), py::arg("trials"));
    m.def(
        "dunn_posthoc",
        [](const std::vector<std::vector<double>>& groups) {
            std::vector<stats::SampleGroup> g;
            for (std::size_t i = 0; i < groups.size(); ++i) g.push_back({std::to_string(i), groups[i]});
            const auto d = stats::dunn_posthoc(g);
            py::dict out;
            out["mean_ranks"] = d.mean_ranks;
            out["z"] = d.z;
            out["p_raw"] = d.p_raw;
            out["p_adjusted"] = d.p_adjusted;
            return out;
        },
        py::arg("groups"));
    m.def("chi_square_sf", &stats::chi_square_sf, py::arg("x"), py::arg("df"));
    m.def("normal_sf", &stats::normal_sf, py::arg("z"));
    m.def(
        "holm_adjust", [](const std::vector<double>& p) { return stats::holm_adjust(p); }, py::arg("p_values"));

    m.def(
        "default_config",
        [](const std::string& algorithm, const std::filesystem::path& scenario) {
            return config_to_json(ExperimentConfig::defaults(algorithm_from_string(algorithm), scenario)).dump();
        },
        py::arg("algorithm"), py::arg("scenario"),
        "Default experiment config as JSON text (scenario embedded).");

    m.def(
        "run_single",
        [](const std::string& config_json, std::uint64_t seed) {
            const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(config_json), ".");
            RunRecord r;
            {
                py::gil_scoped_release release;
                r = run_single(cfg, seed, 0);
            }
            py::dict out = evaluation_dict(r.evaluation);
            out["seed"] = r.metrics.seed;
            out["wall_time_s"] = r.metrics.wall_time_s;
            py::list log;
            for (const auto& g : r.metrics.log) {
                py::dict row;
                row["generation"] = g.generation;
                row["best_fitness"] = g.best_fitness;
                row["mean_fitness"] = g.mean_fitness;
                row["species"] = g.species_count;
                log.append(row);
            }
            out["log"] = log;
            out["genome"] = genome_to_json(r.best).dump();
            return out;
        },
        py::arg("config"), py::arg("seed"));

    m.def(
        "evaluate_genome",
        [](const std::string& genome_json, const Scenario& s, const std::string& algorithm) {
            const Genome g = genome_from_json(nlohmann::json::parse(genome_json));
            return evaluation_dict(evaluate_genome(g, s, algorithm_from_string(algorithm), {}, {}));
        },
        py::arg("genome"), py::arg("scenario"), py::arg("algorithm"));

    m.def(
        "run_experiment",
        [](const std::string& config_json, const std::filesystem::path& out_dir, std::size_t jobs) {
            const ExperimentConfig cfg = config_from_json(nlohmann::json::parse(config_json), ".");
            std::vector<RunMetrics> metrics;
            {
                py::gil_scoped_release release;
                metrics = run_experiment(cfg, out_dir, jobs);
            }
            std::size_t wins = 0;
            for (const auto& mm : metrics) wins += mm.success ? 1 : 0;
            return py::make_tuple(metrics.size(), wins);
        },
        py::arg("config"), py::arg("out_dir"), py::arg("jobs") = 1,
        "Runs a resumable benchmark into out_dir; returns (runs, successes).");
}
