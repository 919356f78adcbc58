#include "scenav/perception.hpp"

#include <cmath>
#include <stdexcept>

namespace scenav {

std::vector<double> min_downsample(const std::vector<double>& scan, int window) {
  if (window < 1) throw std::invalid_argument("min_downsample: window must be positive");
  if (scan.empty() || scan.size() % static_cast<size_t>(window) != 0) {
    throw std::invalid_argument("min_downsample: scan length " + std::to_string(scan.size()) +
                                " is not a multiple of window " + std::to_string(window));
  }
  const size_t n = scan.size() / static_cast<size_t>(window);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) {
    double m = scan[i * window];
    for (int j = 1; j < window; ++j) m = std::min(m, scan[i * window + j]);
    out[i] = m;
  }
  return out;
}

std::pair<double, double> relative_goal(const Vec2& position, double heading, const Vec2& goal) {
  const Vec2 d = goal - position;
  const double dist = norm(d);
  if (dist == 0.0) return {0.0, 0.0};
  return {dist, wrap_angle(std::atan2(d.y, d.x) - heading)};
}

std::array<double, kStateDim> normalize(const StateVector& sv, const NormLimits& limits) {
  std::array<double, kStateDim> out;
  for (int i = 0; i < kScanChannels; ++i) out[i] = sv.scans[i] / limits.scan_max;
  out[kScanChannels + 0] = sv.goal_dist / limits.d_max;
  out[kScanChannels + 1] = sv.goal_angle / kPi;
  out[kScanChannels + 2] = sv.v / limits.v_max;
  out[kScanChannels + 3] = sv.omega / limits.omega_max;
  return out;
}

StateVector sense(const Scenario& s, const RobotState& robot, const Vec2& goal) {
  const std::vector<double> raw =
      lidar_scan(s, robot.position, robot.heading, kScanFov, kScanBeams, kScanMax);
  const std::vector<double> down = min_downsample(raw, kDownsampleWindow);
  StateVector sv;
  for (int i = 0; i < kScanChannels; ++i) sv.scans[i] = down[static_cast<size_t>(i)];
  const auto [dist, angle] = relative_goal(robot.position, robot.heading, goal);
  sv.goal_dist = dist;
  sv.goal_angle = angle;
  sv.v = robot.v;
  sv.omega = robot.omega;
  return sv;
}

}  // namespace scenav
