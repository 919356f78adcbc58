#pragma once

#include <array>
#include <vector>

#include "scenav/geometry.hpp"
#include "scenav/kinematics.hpp"
#include "scenav/scenario.hpp"

namespace scenav {

// Sensor model: 270 deg FOV, 1080 beams, 30 m range, min-downsampled by 36
// into 30 channels. Network input is the 30 scans plus {d_g, phi_g, v, omega}.
constexpr int kScanBeams = 1080;
constexpr int kDownsampleWindow = 36;
constexpr int kScanChannels = kScanBeams / kDownsampleWindow;  // 30
constexpr int kStateDim = kScanChannels + 4;                   // 34
constexpr double kScanFov = 1.5 * kPi;
constexpr double kScanMax = 30.0;

/// Physical (pre-normalization) observation.
struct StateVector {
  std::array<double, kScanChannels> scans{};  // meters, each in (0, scan_max]
  double goal_dist = 0.0;                     // d_g, meters
  double goal_angle = 0.0;                    // phi_g, (-pi, pi]
  double v = 0.0;                             // m/s
  double omega = 0.0;                         // rad/s
};

/// Upper limits of the distance-dependent channels plus the angular-velocity
/// scale used for normalization.
struct NormLimits {
  double scan_max = kScanMax;
  double d_max = 12.0;
  double v_max = 0.5;
  double omega_max = 1.0;
};

/// Minimum over each non-overlapping window of `window` consecutive values.
/// scan.size() must be a multiple of window.
std::vector<double> min_downsample(const std::vector<double>& scan, int window);

/// (d_g, phi_g): Euclidean distance and bearing to the goal in the robot
/// frame. phi_g is 0 when the goal coincides with the position.
std::pair<double, double> relative_goal(const Vec2& position, double heading, const Vec2& goal);

/// Unit-scale network input: scans/scan_max, d_g/d_max, phi_g/pi, v/v_max,
/// omega/omega_max.
std::array<double, kStateDim> normalize(const StateVector& sv, const NormLimits& limits);

/// Full simulated observation at the robot's pose.
StateVector sense(const Scenario& s, const RobotState& robot, const Vec2& goal);

}  // namespace scenav
