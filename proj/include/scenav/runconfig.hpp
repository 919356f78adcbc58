#pragma once

#include <cstdint>
#include <string>

#include "scenav/augment.hpp"
#include "scenav/evalkit.hpp"
#include "scenav/kinematics.hpp"
#include "scenav/sac.hpp"

namespace scenav {

/// One flat run configuration; CLI flags override individual fields.
struct RunConfig {
  std::string scenario_path;
  std::string tasks_path;  // optional: evaluation suite used during training
  RewardConfig reward;
  AugmentConfig augment;
  EpisodeConfig episode;
  NormLimits limits;
  SacConfig sac;
  std::uint64_t seed = 1;
  long total_steps = 200000;
  long eval_interval = 2000;
  std::string out_dir = "run_out";
  std::string resume_path;  // optional checkpoint to continue from
};

/// Parse a JSON run configuration. Missing fields keep their defaults;
/// unknown fields are rejected. validate_run_config is applied before return.
RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin,
                           const std::string& base_dir);

/// Invariants: referenced paths exist, all scalars in range, and one-cycle
/// travel v_max*dt stays below the robot radius so walls cannot be tunneled.
void validate_run_config(const RunConfig& cfg);

}  // namespace scenav
