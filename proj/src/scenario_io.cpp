#include <fstream>

#include "neatnc/scenario_io.hpp"

namespace neatnc {
namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
    require(obj.contains(key) && obj.at(key).is_number(), std::string("scenario: missing numeric field '") + key + "'");
    return obj.at(key).get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    return obj.contains(key) ? number(obj, key) : fallback;
}

Rect rect_from(const json& obj) {
    return {number(obj, "min_x"), number(obj, "min_y"), number(obj, "max_x"), number(obj, "max_y")};
}

json rect_to(const Rect& r) {
    return {{"min_x", r.min_x}, {"min_y", r.min_y}, {"max_x", r.max_x}, {"max_y", r.max_y}};
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    require(doc.is_object(), "scenario: document must be a JSON object");
    Scenario s;
    s.name = doc.value("name", std::string{});
    if (doc.contains("world")) {
        const auto& world = doc.at("world");
        s.bounds = Rect{0.0, 0.0, number(world, "width"), number(world, "height")};
    }
    if (doc.contains("walls"))
        for (const auto& w : doc.at("walls")) s.walls.push_back(rect_from(w));
    if (doc.contains("obstacles")) {
        for (const auto& o : doc.at("obstacles")) {
            DynamicObstacle obs;
            obs.center = {number(o, "cx"), number(o, "cy")};
            obs.radius = number(o, "radius");
            const auto axis = o.value("axis", std::string{"horizontal"});
            require(axis == "horizontal" || axis == "vertical", "scenario: obstacle axis must be horizontal or vertical");
            obs.axis = axis == "horizontal" ? Axis::horizontal : Axis::vertical;
            obs.half_range = number_or(o, "half_range", 0.0);
            obs.speed = number_or(o, "speed", 0.0);
            obs.phase = number_or(o, "phase", 0.0);
            s.obstacles.push_back(obs);
        }
    }
    require(doc.contains("start"), "scenario: missing 'start'");
    const auto& start = doc.at("start");
    s.start = {number(start, "x"), number(start, "y"), normalize_angle(number_or(start, "theta", 0.0)), 0.0};
    require(doc.contains("goal"), "scenario: missing 'goal'");
    const auto& goal = doc.at("goal");
    s.goal = {{number(goal, "x"), number(goal, "y")}, number_or(goal, "radius", 15.0)};
    if (doc.contains("see_zone")) s.see_zone = rect_from(doc.at("see_zone"));
    s.agent_radius = number_or(doc, "agent_radius", 10.0);
    s.sensor_radius = number_or(doc, "sensor_radius", 120.0);
    s.validate();
    return s;
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["name"] = s.name;
    if (s.bounds) doc["world"] = {{"width", s.bounds->max_x}, {"height", s.bounds->max_y}};
    doc["walls"] = json::array();
    for (const auto& w : s.walls) doc["walls"].push_back(rect_to(w));
    doc["obstacles"] = json::array();
    for (const auto& o : s.obstacles) {
        doc["obstacles"].push_back({{"cx", o.center.x},
                                    {"cy", o.center.y},
                                    {"radius", o.radius},
                                    {"axis", o.axis == Axis::horizontal ? "horizontal" : "vertical"},
                                    {"half_range", o.half_range},
                                    {"speed", o.speed},
                                    {"phase", o.phase}});
    }
    doc["start"] = {{"x", s.start.x}, {"y", s.start.y}, {"theta", s.start.theta}};
    doc["goal"] = {{"x", s.goal.position.x}, {"y", s.goal.position.y}, {"radius", s.goal.radius}};
    if (s.see_zone) doc["see_zone"] = rect_to(*s.see_zone);
    doc["agent_radius"] = s.agent_radius;
    doc["sensor_radius"] = s.sensor_radius;
    return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open scenario file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ContractError("scenario " + path.string() + ": " + e.what());
    }
    try {
        return scenario_from_json(doc);
    } catch (const json::exception& e) {
        throw ContractError("scenario " + path.string() + ": " + e.what());
    } catch (const ContractError& e) {
        throw ContractError("scenario " + path.string() + ": " + e.what());
    }
}

}  // namespace neatnc
