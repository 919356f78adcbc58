#pragma once

#include <string>
#include <vector>

#include "scenav/geometry.hpp"
#include "scenav/random.hpp"

namespace scenav {

/// Static 2D world: axis-aligned outer boundary plus line-segment obstacles.
/// Filled shapes are authored as their boundary segments. Immutable after
/// load; every query below is read-only.
struct Scenario {
  std::string name;
  Rect bounds;
  std::vector<Segment> obstacles;  // includes the four boundary walls
  Rect spawn_window;
};

/// Load and validate a scenario document (JSON, see README for the schema).
/// The boundary rectangle is materialized as four obstacle segments.
/// Throws ParseError on schema violations, ValidationError on invariant
/// violations; messages name the offending field.
Scenario load_scenario(const std::string& path);

/// Parse from document text (used by load_scenario and tests).
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

/// Uniformly scaled copy: bounds, obstacles and spawn window multiplied by factor.
Scenario scaled(const Scenario& s, double factor);

/// Distance from origin to the nearest obstacle along the ray, capped at
/// max_range. Result is in (0, max_range]. Throws std::domain_error if the
/// origin is not strictly inside bounds.
double raycast(const Scenario& s, const Vec2& origin, double angle, double max_range);

/// n_beams raycasts fanned over fov centered on heading; beam i points at
/// heading - fov/2 + i * fov/(n_beams-1).
std::vector<double> lidar_scan(const Scenario& s, const Vec2& position, double heading,
                               double fov, int n_beams, double max_range);

/// True iff the minimum point-to-segment distance over all obstacles is
/// strictly less than radius.
bool collision_check(const Scenario& s, const Vec2& center, double radius);

/// Rejection-sample a point uniform over window that is strictly inside
/// bounds and collision-free at the given clearance. Throws
/// SamplingExhausted after kSampleCap rejected draws.
Vec2 sample_free_pose(const Scenario& s, Rng& rng, double clearance, const Rect& window);

constexpr int kSampleCap = 10000;

}  // namespace scenav
