#include "scenav/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "scenav/errors.hpp"

namespace scenav {

namespace {

using nlohmann::json;

Rect parse_rect(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 4) {
    throw ParseError("scenario field '" + field + "': expected [xmin, ymin, xmax, ymax]");
  }
  for (const auto& v : j) {
    if (!v.is_number()) throw ParseError("scenario field '" + field + "': expected 4 numbers");
  }
  Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!std::isfinite(r.xmin) || !std::isfinite(r.ymin) || !std::isfinite(r.xmax) ||
      !std::isfinite(r.ymax)) {
    throw ValidationError("scenario field '" + field + "': non-finite value");
  }
  return r;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("scenario '" + origin + "': " + e.what());
  }
  if (!doc.is_object()) throw ParseError("scenario '" + origin + "': expected a JSON object");

  static const char* known[] = {"name", "bounds", "segments", "spawn_window"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ParseError("scenario field '" + it.key() + "': unknown field");
  }
  for (const char* k : known) {
    if (!doc.contains(k)) throw ParseError(std::string("scenario field '") + k + "': missing");
  }
  if (!doc["name"].is_string()) throw ParseError("scenario field 'name': expected text");

  Scenario s;
  s.name = doc["name"].get<std::string>();
  s.bounds = parse_rect(doc["bounds"], "bounds");
  s.spawn_window = parse_rect(doc["spawn_window"], "spawn_window");

  if (s.bounds.width() <= 0.0 || s.bounds.height() <= 0.0) {
    throw ValidationError("scenario field 'bounds': rectangle must have positive area");
  }
  if (!s.bounds.contains_rect(s.spawn_window)) {
    throw ValidationError("scenario field 'spawn_window': must lie inside bounds");
  }

  // Boundary walls first, then authored segments.
  const Rect& b = s.bounds;
  s.obstacles.push_back({{b.xmin, b.ymin}, {b.xmax, b.ymin}});
  s.obstacles.push_back({{b.xmax, b.ymin}, {b.xmax, b.ymax}});
  s.obstacles.push_back({{b.xmax, b.ymax}, {b.xmin, b.ymax}});
  s.obstacles.push_back({{b.xmin, b.ymax}, {b.xmin, b.ymin}});

  const json& segs = doc["segments"];
  if (!segs.is_array()) throw ParseError("scenario field 'segments': expected a list");
  for (size_t i = 0; i < segs.size(); ++i) {
    const json& e = segs[i];
    const std::string field = "segments[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 4) {
      throw ParseError("scenario field '" + field + "': expected [ax, ay, bx, by]");
    }
    for (const auto& v : e) {
      if (!v.is_number()) throw ParseError("scenario field '" + field + "': expected 4 numbers");
    }
    Segment seg{{e[0].get<double>(), e[1].get<double>()}, {e[2].get<double>(), e[3].get<double>()}};
    if (!std::isfinite(seg.a.x) || !std::isfinite(seg.a.y) || !std::isfinite(seg.b.x) ||
        !std::isfinite(seg.b.y)) {
      throw ValidationError("scenario field '" + field + "': non-finite endpoint");
    }
    if (seg.a == seg.b) {
      throw ValidationError("scenario field '" + field + "': degenerate segment (a == b)");
    }
    if (!s.bounds.contains(seg.a) || !s.bounds.contains(seg.b)) {
      throw ValidationError("scenario field '" + field + "': endpoint outside bounds");
    }
    s.obstacles.push_back(seg);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("scenario file '" + path + "': cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

Scenario scaled(const Scenario& s, double factor) {
  Scenario out;
  out.name = s.name;
  out.bounds = {s.bounds.xmin * factor, s.bounds.ymin * factor, s.bounds.xmax * factor,
                s.bounds.ymax * factor};
  out.spawn_window = {s.spawn_window.xmin * factor, s.spawn_window.ymin * factor,
                      s.spawn_window.xmax * factor, s.spawn_window.ymax * factor};
  out.obstacles.reserve(s.obstacles.size());
  for (const Segment& seg : s.obstacles) {
    out.obstacles.push_back({seg.a * factor, seg.b * factor});
  }
  return out;
}

double raycast(const Scenario& s, const Vec2& origin, double angle, double max_range) {
  if (!s.bounds.contains_strict(origin)) {
    throw std::domain_error("raycast: origin outside scenario bounds");
  }
  if (max_range <= 0.0) throw std::invalid_argument("raycast: max_range must be positive");

  const Vec2 dir{std::cos(angle), std::sin(angle)};
  double best = max_range;
  for (const Segment& seg : s.obstacles) {
    const Vec2 e = seg.b - seg.a;
    const double det = cross(dir, e);
    if (std::abs(det) < 1e-12) continue;  // parallel ray: no intersection
    const Vec2 w = seg.a - origin;
    const double t = cross(w, e) / det;
    if (t <= 0.0 || t >= best) continue;
    const double u = cross(w, dir) / det;
    if (u >= 0.0 && u <= 1.0) best = t;
  }
  return best;
}

std::vector<double> lidar_scan(const Scenario& s, const Vec2& position, double heading,
                               double fov, int n_beams, double max_range) {
  if (n_beams < 2) throw std::invalid_argument("lidar_scan: n_beams must be at least 2");
  std::vector<double> out(static_cast<size_t>(n_beams));
  const double step = fov / (n_beams - 1);
  for (int i = 0; i < n_beams; ++i) {
    out[static_cast<size_t>(i)] = raycast(s, position, heading - 0.5 * fov + i * step, max_range);
  }
  return out;
}

bool collision_check(const Scenario& s, const Vec2& center, double radius) {
  for (const Segment& seg : s.obstacles) {
    if (point_segment_distance(center, seg) < radius) return true;
  }
  return false;
}

Vec2 sample_free_pose(const Scenario& s, Rng& rng, double clearance, const Rect& window) {
  if (!window.intersects(s.bounds)) {
    throw ValidationError("sample_free_pose: window does not intersect scenario bounds");
  }
  for (int i = 0; i < kSampleCap; ++i) {
    const Vec2 p{rng.uniform(window.xmin, window.xmax), rng.uniform(window.ymin, window.ymax)};
    if (!s.bounds.contains_strict(p)) continue;
    if (!collision_check(s, p, clearance)) return p;
  }
  throw SamplingExhausted("sample_free_pose: no free point in window after " +
                          std::to_string(kSampleCap) + " draws");
}

}  // namespace scenav
