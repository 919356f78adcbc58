#pragma once

#include <cstdint>

#include "scenav/sac.hpp"

namespace scenav {

struct GradCheckReport {
  double policy_err = 0.0;
  double value_err = 0.0;
  double q_err = 0.0;
  double policy_path_err = 0.0;

  double worst() const;
};

/// Finite-difference audit of every network shape in the artifact (policy,
/// value, Q) plus the reparameterized policy objective through tanh and the
/// log-density correction.
GradCheckReport run_gradcheck(const SacConfig& cfg, std::uint64_t seed);

constexpr double kGradCheckTolerance = 1e-4;

}  // namespace scenav
