#include <cmath>

#include "neatnc/fitness.hpp"

namespace neatnc {

void FitnessConfig::validate() const {
    require(t_max > 0, "t_max must be positive");
    require(lambda_collision < 0.0, "lambda_collision must be negative");
    require(lambda_goal > 0.0, "lambda_goal must be positive");
}

double displacement_reward(const AgentState& prev, const AgentState& curr, Vec2 goal) {
    const Vec2 to_goal = goal - prev.position();
    const double norm = to_goal.norm();
    if (norm == 0.0) return 0.0;
    return (curr.position() - prev.position()).dot(to_goal) / norm;
}

double step_reward(const AgentState& prev, const AgentState& curr, Vec2 goal, double omega, bool in_see_zone,
                   const FitnessConfig& config) {
    return config.lambda_omega * std::abs(omega) + displacement_reward(prev, curr, goal) +
           (in_see_zone ? config.lambda_see : 0.0);
}

double terminal_reward(Terminal event, std::size_t step, const FitnessConfig& config) {
    switch (event) {
        case Terminal::collided: return config.lambda_collision;
        case Terminal::reached_goal: {
            const double saved = static_cast<double>(config.t_max) - static_cast<double>(step);
            return config.lambda_goal + config.lambda_time * saved;
        }
        case Terminal::truncated: return 0.0;
    }
    return 0.0;
}

RewardBreakdown score_episode(const Episode& episode, Vec2 goal, const FitnessConfig& config) {
    require(!episode.trajectory.empty(), "score_episode: empty trajectory");
    require(episode.trajectory.size() == episode.steps.size() + 1,
            "score_episode: trajectory and step records disagree");
    RewardBreakdown b;
    for (std::size_t i = 0; i < episode.steps.size(); ++i) {
        const auto& rec = episode.steps[i];
        b.r_smooth += config.lambda_omega * std::abs(rec.omega);
        b.r_disp += displacement_reward(episode.trajectory[i], episode.trajectory[i + 1], goal);
        if (rec.events.in_see_zone) b.r_see += config.lambda_see;
    }
    const double terminal = terminal_reward(episode.terminal, episode.steps_used(), config);
    if (episode.terminal == Terminal::collided) b.r_collision = terminal;
    if (episode.terminal == Terminal::reached_goal) b.r_goal = terminal;
    b.total = b.r_goal + b.r_disp + b.r_smooth + b.r_collision + b.r_see;
    return b;
}

}  // namespace neatnc
