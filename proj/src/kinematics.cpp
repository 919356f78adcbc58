#include "scenav/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace scenav {

const char* terminal_name(Terminal t) {
  switch (t) {
    case Terminal::none: return "none";
    case Terminal::goal: return "goal";
    case Terminal::collision: return "collision";
    case Terminal::timeout: return "timeout";
  }
  return "?";
}

RobotState step_kinematics(const RobotState& state, double v, double omega, double dt) {
  RobotState next = state;
  const double theta = state.heading;
  if (std::abs(omega) >= 1e-6) {
    const double r = v / omega;
    next.position.x = state.position.x + r * (std::sin(theta + omega * dt) - std::sin(theta));
    next.position.y = state.position.y - r * (std::cos(theta + omega * dt) - std::cos(theta));
  } else {
    next.position.x = state.position.x + v * dt * std::cos(theta);
    next.position.y = state.position.y + v * dt * std::sin(theta);
  }
  next.heading = wrap_angle(theta + omega * dt);
  next.v = v;
  next.omega = omega;
  return next;
}

std::pair<RobotState, Vec2> reset_episode(const Scenario& s, const EpisodeConfig& cfg, Rng& rng,
                                          double rho) {
  const double clearance = cfg.robot_radius / rho;
  const Vec2 start = sample_free_pose(s, rng, clearance, s.spawn_window);
  RobotState state;
  state.position = start;
  state.heading = rng.heading();
  state.v = 0.0;
  state.omega = 0.0;
  state.radius = clearance;

  const double h = 0.5 * kGoalWindow;
  const Rect goal_window{start.x - h, start.y - h, start.x + h, start.y + h};
  const Vec2 goal = sample_free_pose(s, rng, clearance, goal_window);
  return {state, goal};
}

Terminal check_terminal(const RobotState& state, const Vec2& goal, const Scenario& s,
                        const EpisodeConfig& cfg, double rho, int steps_taken) {
  if (rho * distance(state.position, goal) < cfg.goal_tolerance) return Terminal::goal;
  if (collision_check(s, state.position, cfg.robot_radius / rho)) return Terminal::collision;
  if (steps_taken >= cfg.max_steps) return Terminal::timeout;
  return Terminal::none;
}

std::pair<double, double> pid_policy(double goal_dist, double goal_angle,
                                     const EpisodeConfig& cfg) {
  constexpr double k_v = 1.0;
  constexpr double k_omega = 2.0;
  const double omega = std::clamp(k_omega * goal_angle, -cfg.omega_max, cfg.omega_max);
  const double v =
      std::clamp(k_v * goal_dist * std::max(0.0, std::cos(goal_angle)), 0.0, cfg.v_max);
  return {v, omega};
}

}  // namespace scenav
