#include "scenav/runconfig.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "scenav/errors.hpp"

namespace scenav {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw ParseError("config field '" + where + it.key() + "': unknown field");
  }
}

double num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ParseError(std::string("config field '") + key + "': expected a number");
  return obj[key].get<double>();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / path).string();
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin,
                           const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("config '" + origin + "': " + e.what());
  }
  if (!doc.is_object()) throw ParseError("config '" + origin + "': expected a JSON object");
  reject_unknown(doc,
                 {"scenario", "tasks", "reward", "augment", "episode", "limits", "sac", "seed",
                  "total_steps", "eval_interval", "out", "resume"},
                 "");

  RunConfig cfg;
  if (doc.contains("scenario")) cfg.scenario_path = resolve(base_dir, doc["scenario"].get<std::string>());
  if (doc.contains("tasks")) cfg.tasks_path = resolve(base_dir, doc["tasks"].get<std::string>());
  if (doc.contains("resume")) cfg.resume_path = resolve(base_dir, doc["resume"].get<std::string>());
  if (doc.contains("out")) cfg.out_dir = doc["out"].get<std::string>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("total_steps")) cfg.total_steps = doc["total_steps"].get<long>();
  if (doc.contains("eval_interval")) cfg.eval_interval = doc["eval_interval"].get<long>();

  if (doc.contains("reward")) {
    const json& r = doc["reward"];
    reject_unknown(r, {"kind", "r_reach", "r_crash", "c1"}, "reward.");
    if (r.contains("kind")) {
      const std::string kind = r["kind"].get<std::string>();
      if (kind == "dense") {
        cfg.reward.kind = RewardConfig::Kind::dense;
      } else if (kind == "sparse") {
        cfg.reward.kind = RewardConfig::Kind::sparse;
      } else {
        throw ParseError("config field 'reward.kind': expected 'dense' or 'sparse'");
      }
    }
    cfg.reward.r_reach = num(r, "r_reach", cfg.reward.r_reach);
    cfg.reward.r_crash = num(r, "r_crash", cfg.reward.r_crash);
    cfg.reward.c1 = num(r, "c1", cfg.reward.c1);
  }
  if (doc.contains("augment")) {
    const json& a = doc["augment"];
    reject_unknown(a, {"p", "m"}, "augment.");
    cfg.augment.p = num(a, "p", cfg.augment.p);
    cfg.augment.m = num(a, "m", cfg.augment.m);
  }
  if (doc.contains("episode")) {
    const json& e = doc["episode"];
    reject_unknown(e, {"dt", "max_steps", "goal_tolerance", "v_max", "omega_max", "robot_radius"},
                   "episode.");
    cfg.episode.dt = num(e, "dt", cfg.episode.dt);
    if (e.contains("max_steps")) cfg.episode.max_steps = e["max_steps"].get<int>();
    cfg.episode.goal_tolerance = num(e, "goal_tolerance", cfg.episode.goal_tolerance);
    cfg.episode.v_max = num(e, "v_max", cfg.episode.v_max);
    cfg.episode.omega_max = num(e, "omega_max", cfg.episode.omega_max);
    cfg.episode.robot_radius = num(e, "robot_radius", cfg.episode.robot_radius);
  }
  if (doc.contains("limits")) {
    const json& l = doc["limits"];
    reject_unknown(l, {"scan_max", "d_max"}, "limits.");
    cfg.limits.scan_max = num(l, "scan_max", cfg.limits.scan_max);
    cfg.limits.d_max = num(l, "d_max", cfg.limits.d_max);
  }
  if (doc.contains("sac")) {
    const json& s = doc["sac"];
    reject_unknown(s,
                   {"gamma", "tau", "alpha", "lr", "batch_size", "replay_capacity", "hidden",
                    "log_std_min", "log_std_max", "warmup_episodes", "dropout_rate"},
                   "sac.");
    cfg.sac.gamma = num(s, "gamma", cfg.sac.gamma);
    cfg.sac.tau = num(s, "tau", cfg.sac.tau);
    cfg.sac.alpha = num(s, "alpha", cfg.sac.alpha);
    cfg.sac.lr = num(s, "lr", cfg.sac.lr);
    if (s.contains("batch_size")) cfg.sac.batch_size = s["batch_size"].get<int>();
    if (s.contains("replay_capacity")) cfg.sac.replay_capacity = s["replay_capacity"].get<size_t>();
    if (s.contains("hidden")) {
      if (!s["hidden"].is_array() || s["hidden"].empty()) {
        throw ParseError("config field 'sac.hidden': expected a non-empty list");
      }
      cfg.sac.hidden.clear();
      for (const auto& h : s["hidden"]) cfg.sac.hidden.push_back(h.get<int>());
    }
    cfg.sac.log_std_min = num(s, "log_std_min", cfg.sac.log_std_min);
    cfg.sac.log_std_max = num(s, "log_std_max", cfg.sac.log_std_max);
    if (s.contains("warmup_episodes")) cfg.sac.warmup_episodes = s["warmup_episodes"].get<int>();
    cfg.sac.dropout_rate = num(s, "dropout_rate", cfg.sac.dropout_rate);
  }

  // The normalization scales for velocities mirror the episode limits.
  cfg.limits.v_max = cfg.episode.v_max;
  cfg.limits.omega_max = cfg.episode.omega_max;
  cfg.augment.limits = cfg.limits;

  validate_run_config(cfg);
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config file '" + path + "': cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path, fs::path(path).parent_path().string());
}

void validate_run_config(const RunConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ValidationError("config: " + msg); };
  if (cfg.scenario_path.empty()) fail("field 'scenario' is required");
  if (!fs::exists(cfg.scenario_path)) fail("scenario file '" + cfg.scenario_path + "' does not exist");
  if (!cfg.tasks_path.empty() && !fs::exists(cfg.tasks_path)) {
    fail("task file '" + cfg.tasks_path + "' does not exist");
  }
  if (!cfg.resume_path.empty() && !fs::exists(cfg.resume_path)) {
    fail("resume checkpoint '" + cfg.resume_path + "' does not exist");
  }
  if (cfg.total_steps < 1) fail("total_steps must be >= 1");
  if (cfg.eval_interval < 1) fail("eval_interval must be >= 1");
  if (cfg.augment.p < 0.0 || cfg.augment.p > 1.0) fail("augment.p must be in [0, 1]");
  if (cfg.augment.m <= 1.0) fail("augment.m must be > 1");
  const EpisodeConfig& e = cfg.episode;
  if (e.dt <= 0 || e.goal_tolerance <= 0 || e.v_max <= 0 || e.omega_max <= 0 ||
      e.robot_radius <= 0) {
    fail("episode fields must be positive");
  }
  if (e.max_steps < 1) fail("episode.max_steps must be >= 1");
  if (e.v_max * e.dt >= e.robot_radius) {
    fail("episode.v_max * dt must stay below robot_radius (one-cycle travel would tunnel walls)");
  }
  if (cfg.limits.scan_max <= 0 || cfg.limits.d_max <= 0) fail("limits must be positive");
  const SacConfig& s = cfg.sac;
  if (s.gamma <= 0.0 || s.gamma >= 1.0) fail("sac.gamma must be in (0, 1)");
  if (s.tau <= 0.0 || s.tau > 1.0) fail("sac.tau must be in (0, 1]");
  if (s.alpha < 0.0) fail("sac.alpha must be >= 0");
  if (s.lr <= 0.0) fail("sac.lr must be positive");
  if (s.batch_size < 1) fail("sac.batch_size must be >= 1");
  if (s.replay_capacity < 1) fail("sac.replay_capacity must be >= 1");
  for (int h : s.hidden) {
    if (h < 1) fail("sac.hidden entries must be positive");
  }
  if (s.warmup_episodes < 0) fail("sac.warmup_episodes must be >= 0");
  if (s.dropout_rate < 0.0 || s.dropout_rate >= 1.0) fail("sac.dropout_rate must be in [0, 1)");
}

}  // namespace scenav
