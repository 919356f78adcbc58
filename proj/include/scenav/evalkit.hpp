#pragma once

#include <string>
#include <vector>

#include "scenav/kinematics.hpp"
#include "scenav/perception.hpp"
#include "scenav/sac.hpp"

namespace scenav {

struct RewardConfig {
  enum class Kind { dense, sparse };
  Kind kind = Kind::sparse;
  double r_reach = 1.0;
  double r_crash = -1.0;
  double c1 = 0.1;  // reward per meter of progress (dense only)
};

/// Progress-shaped reward: r_reach on goal, r_crash on collision, otherwise
/// c1*(prev_d - next_d). Distances are imagined-space meters; timeout is
/// non-terminal for reward purposes.
double dense_reward(double prev_d, double next_d, Terminal terminal, const RewardConfig& cfg);

/// Terminal-only reward: r_reach on goal, r_crash on collision, 0 otherwise.
double sparse_reward(Terminal terminal, const RewardConfig& cfg);

double step_reward(const RewardConfig& cfg, double prev_d, double next_d, Terminal terminal);

/// Navigation score: 1 - 2*T_s/T_max on success, -1 otherwise.
double score(bool success, int steps, int t_max);

struct EvalTask {
  std::string scenario_path;
  Vec2 start;
  double heading = 0.0;
  Vec2 goal;
  int t_max = 400;
};

/// Load a task suite document. Scenario paths are resolved relative to the
/// task file. Start and goal must be collision-free at the robot radius.
std::vector<EvalTask> load_tasks(const std::string& path, const EpisodeConfig& cfg);

struct TrajectoryPoint {
  double t = 0.0;
  Vec2 position;
  double heading = 0.0;
  double v = 0.0;
  double omega = 0.0;
  double goal_dist = 0.0;
};

struct TaskResult {
  Terminal outcome = Terminal::none;
  int steps = 0;
  double task_score = -1.0;
  std::vector<TrajectoryPoint> trajectory;
};

struct EvalReport {
  std::vector<TaskResult> tasks;
  double mean_score = 0.0;
  double success_rate = 0.0;
};

/// Run every task once with the deterministic policy and no augmentation
/// (rho = 1). When out_dir is non-empty, writes task_<i>.csv trajectories and
/// report.json there. Read-only with respect to the policy.
EvalReport run_eval(const Mlp& policy, const std::vector<EvalTask>& tasks,
                    const EpisodeConfig& cfg, const NormLimits& limits,
                    const std::string& out_dir = "");

}  // namespace scenav
