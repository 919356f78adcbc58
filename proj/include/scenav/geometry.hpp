#pragma once

#include <algorithm>
#include <cmath>

namespace scenav {

constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }

struct Segment {
  Vec2 a;
  Vec2 b;
};

/// Axis-aligned rectangle, meters.
struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 0.0;
  double ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }

  bool contains(const Vec2& p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
  bool contains_strict(const Vec2& p) const {
    return p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax;
  }
  bool contains_rect(const Rect& r) const {
    return r.xmin >= xmin && r.xmax <= xmax && r.ymin >= ymin && r.ymax <= ymax;
  }
  bool intersects(const Rect& r) const {
    return r.xmin <= xmax && r.xmax >= xmin && r.ymin <= ymax && r.ymax >= ymin;
  }
};

/// Distance from point p to the closed segment s.
inline double point_segment_distance(const Vec2& p, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return distance(p, s.a);
  double t = dot(p - s.a, e) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, s.a + e * t);
}

}  // namespace scenav
