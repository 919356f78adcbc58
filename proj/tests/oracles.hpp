// Test-only reference implementations, independent of the library's
// production code paths.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "scenav/random.hpp"
#include "scenav/scenario.hpp"

namespace scenav::testing {

// Brute-force ray/segment intersection via implicit line forms. Both the
// segment and the ray are converted to a*x + b*y = c; the crossing point is
// solved with Cramer's rule and then validated against the segment extent
// and the ray direction. Deliberately a different algebraic route from the
// parametric solve used in production.
inline std::optional<double> ray_segment_oracle(const Vec2& origin, double angle,
                                                const Segment& seg) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  // ray line: dy*x - dx*y = dy*ox - dx*oy
  const double a1 = dy, b1 = -dx;
  const double c1 = dy * origin.x - dx * origin.y;
  // segment line through (ax,ay)-(bx,by)
  const double a2 = seg.b.y - seg.a.y;
  const double b2 = -(seg.b.x - seg.a.x);
  const double c2 = a2 * seg.a.x + b2 * seg.a.y;
  const double det = a1 * b2 - a2 * b1;
  if (std::abs(det) < 1e-12) return std::nullopt;  // parallel
  const Vec2 p{(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det};
  // inside the segment? (projection onto the segment direction)
  const Vec2 e = seg.b - seg.a;
  const double u = dot(p - seg.a, e) / dot(e, e);
  if (u < 0.0 || u > 1.0) return std::nullopt;
  // ahead of the ray origin?
  const double t = (p.x - origin.x) * dx + (p.y - origin.y) * dy;
  if (t <= 0.0) return std::nullopt;
  return t;
}

inline double raycast_oracle(const Scenario& s, const Vec2& origin, double angle,
                             double max_range) {
  double best = max_range;
  for (const Segment& seg : s.obstacles) {
    if (auto t = ray_segment_oracle(origin, angle, seg)) best = std::min(best, *t);
  }
  return best;
}

// Random scenario with a rectangular boundary and a handful of interior
// segments. Built directly (not via the loader) so geometry tests do not
// depend on document parsing.
inline Scenario random_scenario(Rng& rng) {
  Scenario s;
  s.name = "random";
  const double w = rng.uniform(6.0, 20.0);
  const double h = rng.uniform(6.0, 20.0);
  s.bounds = {-0.5 * w, -0.5 * h, 0.5 * w, 0.5 * h};
  s.spawn_window = s.bounds;
  const Rect& b = s.bounds;
  s.obstacles.push_back({{b.xmin, b.ymin}, {b.xmax, b.ymin}});
  s.obstacles.push_back({{b.xmax, b.ymin}, {b.xmax, b.ymax}});
  s.obstacles.push_back({{b.xmax, b.ymax}, {b.xmin, b.ymax}});
  s.obstacles.push_back({{b.xmin, b.ymax}, {b.xmin, b.ymin}});
  const int n = 5 + rng.uniform_int(20);
  for (int i = 0; i < n; ++i) {
    Segment seg;
    seg.a = {rng.uniform(b.xmin, b.xmax), rng.uniform(b.ymin, b.ymax)};
    const double len = rng.uniform(0.3, 4.0);
    const double dir = rng.uniform(-kPi, kPi);
    seg.b = {seg.a.x + len * std::cos(dir), seg.a.y + len * std::sin(dir)};
    seg.b.x = std::clamp(seg.b.x, b.xmin, b.xmax);
    seg.b.y = std::clamp(seg.b.y, b.ymin, b.ymax);
    if (seg.a == seg.b) continue;
    s.obstacles.push_back(seg);
  }
  return s;
}

// A point strictly inside bounds with a small margin.
inline Vec2 random_interior_point(Rng& rng, const Scenario& s) {
  const double mx = 0.01 * s.bounds.width();
  const double my = 0.01 * s.bounds.height();
  return {rng.uniform(s.bounds.xmin + mx, s.bounds.xmax - mx),
          rng.uniform(s.bounds.ymin + my, s.bounds.ymax - my)};
}

}  // namespace scenav::testing
