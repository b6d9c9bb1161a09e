#pragma once

#include <array>
#include <optional>
#include <span>

#include "neatnc/agent.hpp"

namespace neatnc {

inline constexpr int kGridSize = 3;

struct EncoderConfig {
    double sensor_radius = 120.0;
    double v_max = 3.0;

    [[nodiscard]] double cell_size() const { return 2.0 * sensor_radius / kGridSize; }
    void validate() const;
};

/// [border cells row-major (9), place cells row-major (9), sin, cos, speed]
using InputVector = std::array<double, 21>;

inline constexpr std::size_t kBorderOffset = 0;
inline constexpr std::size_t kPlaceOffset = 9;
inline constexpr std::size_t kHeadSinIndex = 18;
inline constexpr std::size_t kHeadCosIndex = 19;
inline constexpr std::size_t kSpeedIndex = 20;

struct GridCell {
    int row = 0;
    int col = 0;

    friend bool operator==(GridCell, GridCell) = default;
};

/// Translate by the agent position, then rotate by -theta.
Vec2 world_to_agent_frame(Vec2 point, const AgentState& agent);
/// Inverse of world_to_agent_frame.
Vec2 agent_to_world_frame(Vec2 local, const AgentState& agent);

/// Cell of an agent-frame point; nullopt when either index leaves [0, 3).
std::optional<GridCell> grid_index(Vec2 local, const EncoderConfig& config);

/// Navigation-cell observation. `obstacle_points` holds every wall and
/// dynamic-obstacle sample; points beyond the sensor radius are ignored.
InputVector encode(const AgentState& agent, Vec2 goal, std::span<const Vec2> obstacle_points,
                   const EncoderConfig& config);

}  // namespace neatnc
