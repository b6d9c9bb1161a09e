#pragma once

#include "neatnc/common.hpp"

namespace neatnc {

/// Pose and speed of the navigating agent. Heading is counter-clockwise from
/// +x in (-pi, pi]; speed is in world units per step.
struct AgentState {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    double v = 0.0;

    [[nodiscard]] Vec2 position() const { return {x, y}; }

    friend bool operator==(const AgentState&, const AgentState&) = default;
};

}  // namespace neatnc
