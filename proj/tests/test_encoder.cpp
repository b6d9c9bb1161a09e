#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "neatnc/nav_encoder.hpp"

using namespace neatnc;

namespace {

constexpr double kPi = std::numbers::pi;

double cell_sum(const InputVector& v, std::size_t offset) {
    double s = 0.0;
    for (std::size_t i = 0; i < 9; ++i) s += v[offset + i];
    return s;
}

double cell(const InputVector& v, std::size_t offset, int row, int col) {
    return v[offset + static_cast<std::size_t>(row * 3 + col)];
}

// Keeps random points away from cell edges and the sensing circle so that
// rounding cannot move them across a boundary.
bool well_inside(Vec2 local, const EncoderConfig& cfg) {
    const double r = local.norm();
    if (std::abs(r - cfg.sensor_radius) < 1e-6) return false;
    const double d = cfg.cell_size();
    for (double c : {local.x, local.y}) {
        const double u = (c + cfg.sensor_radius) / d;
        if (std::abs(u - std::round(u)) < 1e-6) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("frame transforms") {
    const auto a = world_to_agent_frame({5, 3}, {2, 1, 0, 0});
    CHECK(a.x == 3.0);
    CHECK(a.y == 2.0);

    const auto b = world_to_agent_frame({0, 1}, {0, 0, kPi / 2, 0});
    CHECK(std::abs(b.x - 1.0) <= 1e-12);
    CHECK(std::abs(b.y - 0.0) <= 1e-12);

    const AgentState s{12.5, -4.0, 2.2, 1.0};
    const Vec2 p{-30.0, 71.0};
    const Vec2 back = agent_to_world_frame(world_to_agent_frame(p, s), s);
    CHECK(std::abs(back.x - p.x) <= 1e-12);
    CHECK(std::abs(back.y - p.y) <= 1e-12);
}

TEST_CASE("grid_index") {
    const EncoderConfig cfg;
    CHECK(cfg.cell_size() == 80.0);
    CHECK(grid_index({60, 0}, cfg) == GridCell{1, 2});
    CHECK(grid_index({0, 0}, cfg) == GridCell{1, 1});
    CHECK(grid_index({-120, -120}, cfg) == GridCell{0, 0});
    CHECK(grid_index({119.999, 119.999}, cfg) == GridCell{2, 2});
    CHECK(grid_index({-40, 40}, cfg) == GridCell{2, 1});
    CHECK(grid_index({-40.0001, 39.9999}, cfg) == GridCell{1, 0});
    CHECK_FALSE(grid_index({120, 0}, cfg).has_value());
    CHECK_FALSE(grid_index({0, 120}, cfg).has_value());
    CHECK_FALSE(grid_index({-120.0001, 0}, cfg).has_value());
}

TEST_CASE("empty perception with aligned heading") {
    const EncoderConfig cfg;
    const auto v = encode({0, 0, 0, 0}, {500, 0}, {}, cfg);
    REQUIRE(v.size() == 21);
    for (std::size_t i = 0; i < 18; ++i) CHECK(v[i] == 0.0);
    CHECK(v[kHeadSinIndex] == 0.0);
    CHECK(v[kHeadCosIndex] == 1.0);
    CHECK(v[kSpeedIndex] == 0.0);
}

TEST_CASE("goal ahead-left fires the center place cell") {
    const EncoderConfig cfg;
    const auto v = encode({0, 0, 0, 1.5}, {0, 10}, {}, cfg);
    CHECK(cell(v, kPlaceOffset, 1, 1) == 1.0);
    CHECK(cell_sum(v, kPlaceOffset) == 1.0);
    CHECK(std::abs(v[kHeadSinIndex] - 1.0) <= 1e-12);
    CHECK(std::abs(v[kHeadCosIndex]) <= 1e-12);
    CHECK(v[kSpeedIndex] == 0.5);
}

TEST_CASE("golden fixtures") {
    const EncoderConfig cfg;

    SUBCASE("goal behind the agent") {
        const auto v = encode({0, 0, 0, 3}, {-100, 0}, {}, cfg);
        CHECK(cell(v, kPlaceOffset, 1, 0) == 1.0);
        CHECK(std::abs(v[kHeadSinIndex]) <= 1e-12);
        CHECK(v[kHeadCosIndex] == -1.0);
        CHECK(v[kSpeedIndex] == 1.0);
    }
    SUBCASE("heading rotates the grid") {
        // Facing +y, a goal at world +x lies to the agent's right (negative local y).
        const auto v = encode({0, 0, kPi / 2, 0}, {100, 0}, {}, cfg);
        CHECK(cell(v, kPlaceOffset, 0, 1) == 1.0);
        CHECK(std::abs(v[kHeadSinIndex] + 1.0) <= 1e-12);
        CHECK(std::abs(v[kHeadCosIndex]) <= 1e-12);
    }
    SUBCASE("goal out of radius") {
        const auto v = encode({0, 0, 0, 0}, {120.001, 0}, {}, cfg);
        CHECK(cell_sum(v, kPlaceOffset) == 0.0);
    }
    SUBCASE("point exactly at R is in range but out of grid") {
        const std::vector<Vec2> pts{{120, 0}};
        const auto v = encode({0, 0, 0, 0}, {500, 0}, pts, cfg);
        CHECK(cell_sum(v, kBorderOffset) == 0.0);
    }
    SUBCASE("point at R on the negative side lands in the grid") {
        const std::vector<Vec2> pts{{-120, 0}};
        const auto v = encode({0, 0, 0, 0}, {500, 0}, pts, cfg);
        CHECK(cell(v, kBorderOffset, 1, 0) == 1.0);
        CHECK(cell_sum(v, kBorderOffset) == 1.0);
    }
    SUBCASE("grid corners beyond R are dropped") {
        const std::vector<Vec2> pts{{100, 100}, {-100, -100}};
        const auto v = encode({0, 0, 0, 0}, {500, 0}, pts, cfg);
        CHECK(cell_sum(v, kBorderOffset) == 0.0);
    }
    SUBCASE("corner cells within R fire") {
        const std::vector<Vec2> pts{{60, 60}, {-60, -60}, {60, -60}, {-60, 60}};
        const auto v = encode({0, 0, 0, 0}, {500, 0}, pts, cfg);
        CHECK(cell(v, kBorderOffset, 2, 2) == 1.0);
        CHECK(cell(v, kBorderOffset, 0, 0) == 1.0);
        CHECK(cell(v, kBorderOffset, 0, 2) == 1.0);
        CHECK(cell(v, kBorderOffset, 2, 0) == 1.0);
        CHECK(cell_sum(v, kBorderOffset) == 4.0);
    }
    SUBCASE("duplicate points are idempotent") {
        const std::vector<Vec2> pts{{50, 0}, {50, 1}, {50, 0}};
        const auto v = encode({0, 0, 0, 0}, {500, 0}, pts, cfg);
        CHECK(cell(v, kBorderOffset, 1, 2) == 1.0);
        CHECK(cell_sum(v, kBorderOffset) == 1.0);
    }
    SUBCASE("agent translation") {
        const std::vector<Vec2> pts{{310, 200}};
        const auto v = encode({300, 200, 0, 0}, {300, 260}, pts, cfg);
        CHECK(cell(v, kBorderOffset, 1, 1) == 1.0);
        CHECK(cell(v, kPlaceOffset, 2, 1) == 1.0);
    }
    SUBCASE("speed is clamped") {
        CHECK(encode({0, 0, 0, 7.0}, {1, 0}, {}, cfg)[kSpeedIndex] == 1.0);
        CHECK(encode({0, 0, 0, -1.0}, {1, 0}, {}, cfg)[kSpeedIndex] == 0.0);
        CHECK(encode({0, 0, 0, 0.75}, {1, 0}, {}, cfg)[kSpeedIndex] == 0.25);
    }
    SUBCASE("heading wraps") {
        const auto v = encode({0, 0, 3 * kPi / 4, 0}, {-100, -100}, {}, cfg);
        // bearing -3pi/4 minus heading 3pi/4 is -3pi/2, i.e. +pi/2
        CHECK(std::abs(v[kHeadSinIndex] - 1.0) <= 1e-12);
        CHECK(std::abs(v[kHeadCosIndex]) <= 1e-12);
    }
    SUBCASE("smaller radius shrinks the cells") {
        EncoderConfig small{30.0, 3.0};
        const std::vector<Vec2> pts{{5, 0}, {25, 0}};
        const auto v = encode({0, 0, 0, 0}, {500, 0}, pts, small);
        CHECK(cell(v, kBorderOffset, 1, 1) == 1.0);
        CHECK(cell(v, kBorderOffset, 1, 2) == 1.0);
    }
}

TEST_CASE("non-finite agent state is rejected") {
    const EncoderConfig cfg;
    CHECK_THROWS_AS(encode({std::nan(""), 0, 0, 0}, {1, 0}, {}, cfg), ContractError);
    CHECK_THROWS_AS(encode({0, 0, INFINITY, 0}, {1, 0}, {}, cfg), ContractError);
    CHECK_THROWS_AS((EncoderConfig{-1.0, 3.0}.validate()), ContractError);
}

TEST_CASE("rotation equivariance and translation invariance") {
    const EncoderConfig cfg;
    Rng rng(2718);
    for (int trial = 0; trial < 500; ++trial) {
        const AgentState agent{rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-kPi, kPi), rng.uniform(0, 3)};
        std::vector<Vec2> pts;
        for (int k = 0; k < 12; ++k) {
            const Vec2 local{rng.uniform(-150, 150), rng.uniform(-150, 150)};
            if (well_inside(local, cfg)) pts.push_back(agent_to_world_frame(local, agent));
        }
        Vec2 goal_local{rng.uniform(-150, 150), rng.uniform(-150, 150)};
        while (!well_inside(goal_local, cfg)) goal_local = {rng.uniform(-150, 150), rng.uniform(-150, 150)};
        const Vec2 goal = agent_to_world_frame(goal_local, agent);
        const auto base = encode(agent, goal, pts, cfg);

        const double alpha = rng.uniform(-kPi, kPi);
        auto rotate = [&](Vec2 p) {
            const Vec2 d = p - agent.position();
            return Vec2{agent.x + d.x * std::cos(alpha) - d.y * std::sin(alpha),
                        agent.y + d.x * std::sin(alpha) + d.y * std::cos(alpha)};
        };
        std::vector<Vec2> rpts;
        for (auto p : pts) rpts.push_back(rotate(p));
        const AgentState rag{agent.x, agent.y, agent.theta + alpha, agent.v};
        const auto rotated = encode(rag, rotate(goal), rpts, cfg);
        for (std::size_t i = 0; i < 21; ++i) CHECK(std::abs(rotated[i] - base[i]) <= 1e-9);

        const double norm = base[kHeadSinIndex] * base[kHeadSinIndex] + base[kHeadCosIndex] * base[kHeadCosIndex];
        CHECK(std::abs(norm - 1.0) <= 1e-9);
    }

    // Dyadic coordinates make the translated arithmetic exact.
    for (int trial = 0; trial < 500; ++trial) {
        auto dy = [&](double lo, double hi) { return std::round(rng.uniform(lo, hi) * 8.0) / 8.0; };
        const AgentState agent{dy(-64, 64), dy(-64, 64), rng.uniform(-kPi, kPi), dy(0, 3)};
        std::vector<Vec2> pts;
        for (int k = 0; k < 12; ++k) pts.push_back({agent.x + dy(-150, 150), agent.y + dy(-150, 150)});
        const Vec2 goal{agent.x + dy(-150, 150), agent.y + dy(-150, 150)};
        const Vec2 shift{dy(-512, 512), dy(-512, 512)};
        std::vector<Vec2> moved;
        for (auto p : pts) moved.push_back(p + shift);
        const auto a = encode(agent, goal, pts, cfg);
        const auto b = encode({agent.x + shift.x, agent.y + shift.y, agent.theta, agent.v}, goal + shift, moved, cfg);
        CHECK(a == b);
    }
}

TEST_CASE("each in-range point sets exactly one cell") {
    const EncoderConfig cfg;
    Rng rng(11);
    for (int trial = 0; trial < 2000; ++trial) {
        const Vec2 p{rng.uniform(-170, 170), rng.uniform(-170, 170)};
        const std::vector<Vec2> pts{p};
        const auto v = encode({0, 0, 0, 0}, {1000, 0}, pts, cfg);
        const double expected = (p.norm() < 120.0 && grid_index(p, cfg)) ? 1.0 : 0.0;
        if (p.norm() > 120.0) CHECK(cell_sum(v, kBorderOffset) == 0.0);
        CHECK(cell_sum(v, kBorderOffset) == expected);
    }
}

TEST_CASE("encode is pure") {
    const EncoderConfig cfg;
    const std::vector<Vec2> pts{{10, 20}, {-30, 5}};
    const auto a = encode({1, 2, 0.3, 1.0}, {40, 40}, pts, cfg);
    const auto b = encode({1, 2, 0.3, 1.0}, {40, 40}, pts, cfg);
    CHECK(a == b);
}
