#pragma once

#include <functional>
#include <string>

#include "scenav/runconfig.hpp"

namespace scenav {

struct EpisodeStats {
  long episode = 0;
  long step_end = 0;  // global env steps after this episode
  double rho = 1.0;
  double episode_return = 0.0;
  int length = 0;
  Terminal outcome = Terminal::none;
  int critic_updates = 0;
  int policy_updates = 0;
  double q1_loss = 0.0;
  double q2_loss = 0.0;
  double value_loss = 0.0;
  double policy_loss = 0.0;
};

/// Test/inspection hooks; every callback may be empty.
struct TrainHooks {
  std::function<void(long episode, double rho)> on_episode_start;
  std::function<void(const StateVector& simulated, double rho, const Transition& stored)>
      on_store;
  std::function<void(const EpisodeStats&)> on_episode_end;
  /// Return true to stop training after the episode (budget not yet reached).
  std::function<bool(const EpisodeStats&)> stop_after_episode;
};

struct TrainResult {
  long total_steps = 0;
  long episodes = 0;
  double final_eval_score = 0.0;
  double final_eval_success = 0.0;
  std::string final_checkpoint;
};

/// The full training loop: per episode draw rho, roll the policy through the
/// imagined-space pipeline, store imagined transitions, then run T critic
/// updates with a soft target update each and a policy update every second
/// tick. The first warmup_episodes episodes act with the proportional
/// controller instead of policy sampling. Evaluates and checkpoints every
/// eval_interval steps. Writes metrics.csv under cfg.out_dir.
TrainResult train(const RunConfig& cfg, const TrainHooks& hooks = {});

}  // namespace scenav
