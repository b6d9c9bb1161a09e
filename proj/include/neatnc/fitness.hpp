#pragma once

#include <cstddef>

#include "neatnc/environment.hpp"

namespace neatnc {

struct FitnessConfig {
    double lambda_omega = -0.05;     // smoothness weight on |omega|
    double lambda_collision = -100.0;
    double lambda_goal = 5000.0;
    double lambda_time = 5.0;        // bonus per step saved before t_max
    double lambda_see = 10.0;        // per step spent inside the see-zone
    std::size_t t_max = 1000;

    void validate() const;
};

struct RewardBreakdown {
    double r_goal = 0.0;
    double r_disp = 0.0;
    double r_smooth = 0.0;
    double r_collision = 0.0;
    double r_see = 0.0;
    double total = 0.0;
};

/// Progress of the step along the unit vector from `prev` to the goal.
/// Zero when `prev` sits exactly on the goal.
double displacement_reward(const AgentState& prev, const AgentState& curr, Vec2 goal);

double step_reward(const AgentState& prev, const AgentState& curr, Vec2 goal, double omega, bool in_see_zone,
                   const FitnessConfig& config);

/// `step` is the 1-based step at which the terminal event happened.
double terminal_reward(Terminal event, std::size_t step, const FitnessConfig& config);

RewardBreakdown score_episode(const Episode& episode, Vec2 goal, const FitnessConfig& config);

}  // namespace neatnc
