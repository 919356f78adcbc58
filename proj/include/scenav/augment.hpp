#pragma once

#include <algorithm>
#include <utility>

#include "scenav/perception.hpp"
#include "scenav/random.hpp"

namespace scenav {

/// Scenario augmentation parameters. rho is the ratio of the imagined-space
/// dimension to the simulated-space dimension; p is the probability of
/// drawing rho > 1 for an episode and m its upper bound.
struct AugmentConfig {
  double p = 0.5;
  double m = 4.0;
  NormLimits limits;
};

/// Draw the per-episode scale factor: 1.0 with probability 1-p, otherwise
/// uniform in [1, m].
inline double sample_rho(Rng& rng, const AugmentConfig& cfg) {
  const double eps = rng.uniform();
  if (eps >= cfg.p) return 1.0;
  return rng.uniform(1.0, cfg.m);
}

/// Observation scaling: distance-dependent channels (scans, v, d_g) are
/// multiplied by rho and clipped at their upper limits; angular channels
/// (phi_g, omega) are unchanged.
inline StateVector scale_observation(const StateVector& sv, double rho,
                                     const NormLimits& limits) {
  StateVector out = sv;
  for (int i = 0; i < kScanChannels; ++i) {
    out.scans[i] = std::min(rho * sv.scans[i], limits.scan_max);
  }
  out.goal_dist = std::min(rho * sv.goal_dist, limits.d_max);
  out.v = std::min(rho * sv.v, limits.v_max);
  return out;
}

/// Policy scaling: the imagined linear velocity is compressed by rho so the
/// simulated arc reproduces the imagined arc with identical swept angle.
inline std::pair<double, double> scale_action(double v_imagined, double omega, double rho) {
  return {v_imagined / rho, omega};
}

/// Simulated-space collision radius of a robot with imagined radius r.
inline double scaled_radius(double r, double rho) { return r / rho; }

}  // namespace scenav
