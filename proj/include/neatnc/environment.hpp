#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neatnc/agent.hpp"
#include "neatnc/nav_encoder.hpp"

namespace neatnc {

/// Axis-aligned rectangle.
struct Rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    [[nodiscard]] bool contains(Vec2 p) const {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
    [[nodiscard]] Vec2 closest_point(Vec2 p) const;
    friend bool operator==(const Rect&, const Rect&) = default;
};

using Wall = Rect;

enum class Axis { horizontal, vertical };

/// Disc oscillating along one axis as a triangle wave: constant speed,
/// reversing at center +- half_range. `phase` is the signed offset at t = 0.
struct DynamicObstacle {
    Vec2 center;
    double radius = 10.0;
    Axis axis = Axis::horizontal;
    double half_range = 0.0;
    double speed = 0.0;
    double phase = 0.0;
};

struct Goal {
    Vec2 position;
    double radius = 15.0;
};

struct Kinematics {
    double v_max = 3.0;
    double omega_max = std::numbers::pi / 6.0;

    void validate() const;
};

struct Scenario {
    std::string name;
    std::optional<Rect> bounds;  // absent means an unbounded arena
    std::vector<Wall> walls;
    std::vector<DynamicObstacle> obstacles;
    AgentState start;
    Goal goal;
    std::optional<Rect> see_zone;
    double agent_radius = 10.0;
    double sensor_radius = 120.0;

    /// Throws ContractError describing the first violated invariant.
    void validate() const;
};

struct Action {
    double angular = 0.0;
    double linear = 0.0;
};

struct StepEvents {
    bool collided = false;
    bool reached_goal = false;
    bool in_see_zone = false;

    friend bool operator==(const StepEvents&, const StepEvents&) = default;
};

struct StepOutcome {
    AgentState state;
    StepEvents events;
    double omega = 0.0;  // commanded angular velocity, rad/step
    std::vector<Vec2> obstacle_positions;
};

Vec2 obstacle_position(const DynamicObstacle& obstacle, std::int64_t t);

/// True when a disc of the scenario's agent radius at `position` overlaps a
/// wall, an obstacle at step t, or crosses the world bounds.
bool in_collision(const Scenario& scenario, Vec2 position, std::int64_t t);

/// Turn, then translate. Collision is tested against obstacles at t + 1 and
/// takes precedence over reaching the goal.
StepOutcome step(const Scenario& scenario, const AgentState& agent, Action action, std::int64_t t,
                 const Kinematics& kinematics = {});

/// Perimeter samples of every wall (and the world bounds) with spacing at most `spacing`.
std::vector<Vec2> wall_samples(const Scenario& scenario, double spacing);

/// Static wall samples cached for one sensor radius.
class PerceptionField {
public:
    PerceptionField(const Scenario& scenario, double sensor_radius);

    /// Wall and obstacle samples within the sensor radius of the agent at step t.
    [[nodiscard]] std::vector<Vec2> points(const AgentState& agent, std::int64_t t) const;
    void points_into(const AgentState& agent, std::int64_t t, std::vector<Vec2>& out) const;

private:
    const Scenario* scenario_;
    double radius_;
    std::vector<Vec2> wall_points_;
};

std::vector<Vec2> perception_points(const Scenario& scenario, const AgentState& agent, std::int64_t t,
                                    double sensor_radius);

/// Eight normalized ray distances at bearings theta + k*pi/4.
std::array<double, 8> radar_scan(const Scenario& scenario, const AgentState& agent, std::int64_t t,
                                 double sensor_radius);

enum class EncoderMode { nav_cells, radar };
enum class Terminal { collided, reached_goal, truncated };

std::string to_string(Terminal terminal);
std::string to_string(EncoderMode mode);

struct StepRecord {
    double omega = 0.0;
    StepEvents events;
};

struct Episode {
    std::vector<AgentState> trajectory;  // start state plus one state per step
    std::vector<StepRecord> steps;
    Terminal terminal = Terminal::truncated;

    [[nodiscard]] std::size_t steps_used() const { return steps.size(); }
};

using Controller = std::function<Action(std::span<const double>)>;

/// Runs from the scenario start until collision, goal, or t_max steps.
Episode run_episode(const Scenario& scenario, const Controller& controller, EncoderMode mode, std::size_t t_max,
                    const Kinematics& kinematics = {});

/// Sum of Euclidean displacements between consecutive states.
double path_length(std::span<const AgentState> trajectory);

}  // namespace neatnc
