#include <algorithm>
#include <cmath>
#include <limits>

#include "neatnc/environment.hpp"

namespace neatnc {
namespace {

bool finite(const AgentState& a) {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.theta) && std::isfinite(a.v);
}

bool valid_rect(const Rect& r) {
    return std::isfinite(r.min_x) && std::isfinite(r.min_y) && std::isfinite(r.max_x) &&
           std::isfinite(r.max_y) && r.min_x < r.max_x && r.min_y < r.max_y;
}

void sample_segment(Vec2 from, Vec2 to, double spacing, std::vector<Vec2>& out) {
    const double length = distance(from, to);
    const auto pieces = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(length / spacing)));
    for (std::size_t i = 0; i < pieces; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(pieces);
        out.push_back(from + f * (to - from));
    }
}

void sample_rect(const Rect& r, double spacing, std::vector<Vec2>& out) {
    const Vec2 a{r.min_x, r.min_y}, b{r.max_x, r.min_y}, c{r.max_x, r.max_y}, d{r.min_x, r.max_y};
    sample_segment(a, b, spacing, out);
    sample_segment(b, c, spacing, out);
    sample_segment(c, d, spacing, out);
    sample_segment(d, a, spacing, out);
}

constexpr double kInf = std::numeric_limits<double>::infinity();

// Entry distance along the ray into a rectangle; 0 if the origin is inside.
double ray_rect(Vec2 origin, Vec2 dir, const Rect& r) {
    double t_near = -kInf, t_far = kInf;
    const double o[2] = {origin.x, origin.y};
    const double d[2] = {dir.x, dir.y};
    const double lo[2] = {r.min_x, r.min_y};
    const double hi[2] = {r.max_x, r.max_y};
    for (int k = 0; k < 2; ++k) {
        if (std::abs(d[k]) < 1e-15) {
            if (o[k] < lo[k] || o[k] > hi[k]) return kInf;
            continue;
        }
        double t1 = (lo[k] - o[k]) / d[k];
        double t2 = (hi[k] - o[k]) / d[k];
        if (t1 > t2) std::swap(t1, t2);
        t_near = std::max(t_near, t1);
        t_far = std::min(t_far, t2);
    }
    if (t_near > t_far || t_far < 0.0) return kInf;
    return std::max(t_near, 0.0);
}

double ray_circle(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
    const Vec2 f = origin - center;
    const double b = f.dot(dir);
    const double c = f.dot(f) - radius * radius;
    if (c <= 0.0) return 0.0;
    const double disc = b * b - c;
    if (disc < 0.0) return kInf;
    const double t = -b - std::sqrt(disc);
    return t >= 0.0 ? t : kInf;
}

// Distance until the ray leaves the bounds box (origin assumed inside).
double ray_exit(Vec2 origin, Vec2 dir, const Rect& r) {
    if (!r.contains(origin)) return 0.0;
    double t = kInf;
    if (dir.x > 1e-15) t = std::min(t, (r.max_x - origin.x) / dir.x);
    if (dir.x < -1e-15) t = std::min(t, (r.min_x - origin.x) / dir.x);
    if (dir.y > 1e-15) t = std::min(t, (r.max_y - origin.y) / dir.y);
    if (dir.y < -1e-15) t = std::min(t, (r.min_y - origin.y) / dir.y);
    return t;
}

}  // namespace

Vec2 Rect::closest_point(Vec2 p) const {
    return {std::clamp(p.x, min_x, max_x), std::clamp(p.y, min_y, max_y)};
}

void Kinematics::validate() const {
    require(std::isfinite(v_max) && v_max > 0.0, "v_max must be positive");
    require(std::isfinite(omega_max) && omega_max >= 0.0, "omega_max must be non-negative");
}

void Scenario::validate() const {
    if (bounds) require(valid_rect(*bounds), "world bounds must have positive extent");
    for (std::size_t i = 0; i < walls.size(); ++i)
        require(valid_rect(walls[i]), "wall " + std::to_string(i) + " must satisfy min < max on both axes");
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const auto& o = obstacles[i];
        require(std::isfinite(o.center.x) && std::isfinite(o.center.y) && o.radius > 0.0 && o.half_range >= 0.0 &&
                    o.speed >= 0.0 && std::isfinite(o.phase) && std::abs(o.phase) <= o.half_range,
                "obstacle " + std::to_string(i) + " is malformed");
    }
    if (see_zone) require(valid_rect(*see_zone), "see_zone must have positive extent");
    require(agent_radius > 0.0, "agent_radius must be positive");
    require(sensor_radius > 0.0, "sensor_radius must be positive");
    require(goal.radius >= 0.0 && std::isfinite(goal.position.x) && std::isfinite(goal.position.y),
            "goal is malformed");
    require(finite(start), "start state must be finite");
    require(!in_collision(*this, start.position(), 0), "start pose is in collision");
    for (const auto& w : walls) require(!w.contains(goal.position), "goal lies inside a wall");
    if (bounds) require(bounds->contains(goal.position), "goal lies outside the world bounds");
}

Vec2 obstacle_position(const DynamicObstacle& obstacle, std::int64_t t) {
    require(t >= 0, "obstacle_position: t must be non-negative");
    const double h = obstacle.half_range;
    double offset = 0.0;
    if (h > 0.0) {
        const double period = 4.0 * h;
        double s = std::fmod(obstacle.phase + obstacle.speed * static_cast<double>(t), period);
        if (s < 0.0) s += period;
        if (s < h) offset = s;
        else if (s < 3.0 * h) offset = 2.0 * h - s;
        else offset = s - period;
    }
    return obstacle.axis == Axis::horizontal ? Vec2{obstacle.center.x + offset, obstacle.center.y}
                                             : Vec2{obstacle.center.x, obstacle.center.y + offset};
}

bool in_collision(const Scenario& scenario, Vec2 position, std::int64_t t) {
    const double r = scenario.agent_radius;
    if (scenario.bounds) {
        const Rect& b = *scenario.bounds;
        if (position.x - r < b.min_x || position.x + r > b.max_x || position.y - r < b.min_y ||
            position.y + r > b.max_y)
            return true;
    }
    for (const auto& w : scenario.walls) {
        const Vec2 d = position - w.closest_point(position);
        if (d.dot(d) < r * r) return true;
    }
    for (const auto& o : scenario.obstacles) {
        const double reach = r + o.radius;
        const Vec2 d = position - obstacle_position(o, t);
        if (d.dot(d) < reach * reach) return true;
    }
    return false;
}

StepOutcome step(const Scenario& scenario, const AgentState& agent, Action action, std::int64_t t,
                 const Kinematics& kinematics) {
    require(std::isfinite(action.angular) && std::isfinite(action.linear), "step: action must be finite");
    const double angular = std::clamp(action.angular, -1.0, 1.0);
    const double linear = std::clamp(action.linear, -1.0, 1.0);

    StepOutcome out;
    out.omega = angular * kinematics.omega_max;
    const double v = (linear + 1.0) / 2.0 * kinematics.v_max;
    const double theta = normalize_angle(agent.theta + out.omega);
    out.state = {agent.x + v * std::cos(theta), agent.y + v * std::sin(theta), theta, v};

    const Vec2 p = out.state.position();
    out.events.collided = in_collision(scenario, p, t + 1);
    out.events.reached_goal =
        !out.events.collided && distance(p, scenario.goal.position) <= scenario.goal.radius + scenario.agent_radius;
    out.events.in_see_zone = scenario.see_zone && scenario.see_zone->contains(p);
    out.obstacle_positions.reserve(scenario.obstacles.size());
    for (const auto& o : scenario.obstacles) out.obstacle_positions.push_back(obstacle_position(o, t + 1));
    return out;
}

std::vector<Vec2> wall_samples(const Scenario& scenario, double spacing) {
    require(spacing > 0.0, "wall_samples: spacing must be positive");
    std::vector<Vec2> out;
    for (const auto& w : scenario.walls) sample_rect(w, spacing, out);
    if (scenario.bounds) sample_rect(*scenario.bounds, spacing, out);
    return out;
}

PerceptionField::PerceptionField(const Scenario& scenario, double sensor_radius)
    : scenario_(&scenario), radius_(sensor_radius) {
    require(sensor_radius > 0.0, "sensor radius must be positive");
    // Half a grid cell: 2R/3 / 2.
    wall_points_ = wall_samples(scenario, sensor_radius / 3.0);
}

void PerceptionField::points_into(const AgentState& agent, std::int64_t t, std::vector<Vec2>& out) const {
    out.clear();
    const Vec2 here = agent.position();
    const double r2 = radius_ * radius_;
    auto keep = [&](Vec2 p) {
        const Vec2 d = p - here;
        if (d.dot(d) <= r2) out.push_back(p);
    };
    for (const Vec2& p : wall_points_) keep(p);
    for (const auto& o : scenario_->obstacles) {
        const Vec2 c = obstacle_position(o, t);
        keep(c);
        for (int k = 0; k < 8; ++k) {
            const double a = k * std::numbers::pi / 4.0;
            keep({c.x + o.radius * std::cos(a), c.y + o.radius * std::sin(a)});
        }
    }
}

std::vector<Vec2> PerceptionField::points(const AgentState& agent, std::int64_t t) const {
    std::vector<Vec2> out;
    points_into(agent, t, out);
    return out;
}

std::vector<Vec2> perception_points(const Scenario& scenario, const AgentState& agent, std::int64_t t,
                                    double sensor_radius) {
    return PerceptionField(scenario, sensor_radius).points(agent, t);
}

std::array<double, 8> radar_scan(const Scenario& scenario, const AgentState& agent, std::int64_t t,
                                 double sensor_radius) {
    require(sensor_radius > 0.0, "radar_scan: sensor radius must be positive");
    std::array<double, 8> readings{};
    const Vec2 origin = agent.position();
    std::vector<Vec2> centers;
    for (const auto& o : scenario.obstacles) centers.push_back(obstacle_position(o, t));

    for (int k = 0; k < 8; ++k) {
        const double bearing = agent.theta + k * std::numbers::pi / 4.0;
        const Vec2 dir{std::cos(bearing), std::sin(bearing)};
        double hit = kInf;
        for (const auto& w : scenario.walls) hit = std::min(hit, ray_rect(origin, dir, w));
        for (std::size_t i = 0; i < centers.size(); ++i)
            hit = std::min(hit, ray_circle(origin, dir, centers[i], scenario.obstacles[i].radius));
        if (scenario.bounds) hit = std::min(hit, ray_exit(origin, dir, *scenario.bounds));
        readings[static_cast<std::size_t>(k)] = std::min(hit, sensor_radius) / sensor_radius;
    }
    return readings;
}

std::string to_string(Terminal terminal) {
    switch (terminal) {
        case Terminal::collided: return "collided";
        case Terminal::reached_goal: return "reached_goal";
        case Terminal::truncated: return "truncated";
    }
    return "?";
}

std::string to_string(EncoderMode mode) { return mode == EncoderMode::nav_cells ? "nav_cells" : "radar"; }

Episode run_episode(const Scenario& scenario, const Controller& controller, EncoderMode mode, std::size_t t_max,
                    const Kinematics& kinematics) {
    const EncoderConfig encoder{scenario.sensor_radius, kinematics.v_max};
    const PerceptionField field(scenario, scenario.sensor_radius);
    std::vector<Vec2> points;

    Episode episode;
    episode.trajectory.reserve(t_max + 1);
    episode.trajectory.push_back(scenario.start);
    AgentState state = scenario.start;

    for (std::size_t t = 0; t < t_max; ++t) {
        const auto now = static_cast<std::int64_t>(t);
        Action action;
        if (mode == EncoderMode::nav_cells) {
            field.points_into(state, now, points);
            const auto input = encode(state, scenario.goal.position, points, encoder);
            action = controller(input);
        } else {
            const auto input = radar_scan(scenario, state, now, scenario.sensor_radius);
            action = controller(input);
        }
        const StepOutcome out = step(scenario, state, action, now, kinematics);
        state = out.state;
        episode.trajectory.push_back(state);
        episode.steps.push_back({out.omega, out.events});
        if (out.events.collided) {
            episode.terminal = Terminal::collided;
            break;
        }
        if (out.events.reached_goal) {
            episode.terminal = Terminal::reached_goal;
            break;
        }
    }
    return episode;
}

double path_length(std::span<const AgentState> trajectory) {
    double total = 0.0;
    for (std::size_t i = 1; i < trajectory.size(); ++i)
        total += distance(trajectory[i].position(), trajectory[i - 1].position());
    return total;
}

}  // namespace neatnc
