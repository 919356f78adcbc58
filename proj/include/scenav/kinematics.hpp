#pragma once

#include <utility>

#include "scenav/geometry.hpp"
#include "scenav/random.hpp"
#include "scenav/scenario.hpp"

namespace scenav {

enum class Terminal { none, goal, collision, timeout };

const char* terminal_name(Terminal t);

struct RobotState {
  Vec2 position;
  double heading = 0.0;  // (-pi, pi]
  double v = 0.0;        // commanded linear velocity, m/s
  double omega = 0.0;    // commanded angular velocity, rad/s
  double radius = 0.2;   // collision radius in this (simulated) space
};

/// Per-episode control parameters. goal_tolerance and robot_radius are
/// imagined-space quantities; the simulated radius is robot_radius/rho.
struct EpisodeConfig {
  double dt = 0.2;             // seconds per control cycle
  int max_steps = 400;
  double goal_tolerance = 0.3;  // meters, imagined space
  double v_max = 0.5;           // m/s
  double omega_max = 1.0;       // rad/s
  double robot_radius = 0.2;    // meters, imagined space
};

/// Constant-velocity integration over one control cycle. The trajectory is a
/// circular arc for |omega| >= 1e-6 and a straight line below that.
RobotState step_kinematics(const RobotState& state, double v, double omega, double dt);

/// Sample a start pose (clearance robot_radius/rho, heading uniform) from the
/// spawn window and a goal from the free space of the 8x8 m window centered
/// on the start. Velocities start at zero.
std::pair<RobotState, Vec2> reset_episode(const Scenario& s, const EpisodeConfig& cfg, Rng& rng,
                                          double rho);

/// Terminal test in imagined space: goal if rho*|position-goal| <
/// goal_tolerance, else collision at radius robot_radius/rho, else timeout at
/// max_steps. Precedence goal > collision > timeout.
Terminal check_terminal(const RobotState& state, const Vec2& goal, const Scenario& s,
                        const EpisodeConfig& cfg, double rho, int steps_taken);

/// Proportional goal-seeking controller used for warmup exploration.
/// omega = clamp(2*phi, +-omega_max), v = clamp(d*max(0, cos phi), 0, v_max).
std::pair<double, double> pid_policy(double goal_dist, double goal_angle,
                                     const EpisodeConfig& cfg);

/// Side length of the goal-sampling window centered on the start pose.
constexpr double kGoalWindow = 8.0;

}  // namespace scenav
