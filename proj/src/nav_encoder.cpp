#include <algorithm>
#include <cmath>

#include "neatnc/nav_encoder.hpp"

namespace neatnc {

void EncoderConfig::validate() const {
    require(std::isfinite(sensor_radius) && sensor_radius > 0.0, "sensor_radius must be positive");
    require(std::isfinite(v_max) && v_max > 0.0, "v_max must be positive");
}

Vec2 world_to_agent_frame(Vec2 point, const AgentState& agent) {
    const double dx = point.x - agent.x;
    const double dy = point.y - agent.y;
    const double c = std::cos(-agent.theta);
    const double s = std::sin(-agent.theta);
    return {dx * c - dy * s, dx * s + dy * c};
}

Vec2 agent_to_world_frame(Vec2 local, const AgentState& agent) {
    const double c = std::cos(agent.theta);
    const double s = std::sin(agent.theta);
    return {agent.x + local.x * c - local.y * s, agent.y + local.x * s + local.y * c};
}

std::optional<GridCell> grid_index(Vec2 local, const EncoderConfig& config) {
    const double r = config.sensor_radius;
    const double cell = config.cell_size();
    const double col = std::floor((local.x + r) / cell);
    const double row = std::floor((local.y + r) / cell);
    if (col < 0.0 || col >= kGridSize || row < 0.0 || row >= kGridSize) return std::nullopt;
    return GridCell{static_cast<int>(row), static_cast<int>(col)};
}

InputVector encode(const AgentState& agent, Vec2 goal, std::span<const Vec2> obstacle_points,
                   const EncoderConfig& config) {
    require(std::isfinite(agent.x) && std::isfinite(agent.y) && std::isfinite(agent.theta) &&
                std::isfinite(agent.v),
            "encode: agent state must be finite");
    InputVector input{};
    const Vec2 here = agent.position();
    const double r2 = config.sensor_radius * config.sensor_radius;

    auto mark = [&](Vec2 point, std::size_t offset) {
        const Vec2 d = point - here;
        if (d.x * d.x + d.y * d.y > r2) return;
        if (auto cell = grid_index(world_to_agent_frame(point, agent), config))
            input[offset + static_cast<std::size_t>(cell->row * kGridSize + cell->col)] = 1.0;
    };
    for (const Vec2& p : obstacle_points) mark(p, kBorderOffset);
    mark(goal, kPlaceOffset);

    const double relative = std::atan2(goal.y - agent.y, goal.x - agent.x) - agent.theta;
    input[kHeadSinIndex] = std::sin(relative);
    input[kHeadCosIndex] = std::cos(relative);
    input[kSpeedIndex] = std::clamp(agent.v / config.v_max, 0.0, 1.0);
    return input;
}

}  // namespace neatnc
