#include "scenav/evalkit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "scenav/augment.hpp"
#include "scenav/errors.hpp"

namespace scenav {

namespace fs = std::filesystem;
using nlohmann::json;

double dense_reward(double prev_d, double next_d, Terminal terminal, const RewardConfig& cfg) {
  if (terminal == Terminal::goal) return cfg.r_reach;
  if (terminal == Terminal::collision) return cfg.r_crash;
  return cfg.c1 * (prev_d - next_d);
}

double sparse_reward(Terminal terminal, const RewardConfig& cfg) {
  if (terminal == Terminal::goal) return cfg.r_reach;
  if (terminal == Terminal::collision) return cfg.r_crash;
  return 0.0;
}

double step_reward(const RewardConfig& cfg, double prev_d, double next_d, Terminal terminal) {
  if (cfg.kind == RewardConfig::Kind::dense) {
    return dense_reward(prev_d, next_d, terminal, cfg);
  }
  return sparse_reward(terminal, cfg);
}

double score(bool success, int steps, int t_max) {
  if (!success) return -1.0;
  return 1.0 - 2.0 * static_cast<double>(steps) / static_cast<double>(t_max);
}

std::vector<EvalTask> load_tasks(const std::string& path, const EpisodeConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ValidationError("task file '" + path + "': cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("task file '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("tasks") || !doc["tasks"].is_array()) {
    throw ParseError("task file '" + path + "': expected an object with a 'tasks' list");
  }

  const fs::path base = fs::path(path).parent_path();
  std::map<std::string, Scenario> cache;
  std::vector<EvalTask> out;
  size_t idx = 0;
  for (const json& e : doc["tasks"]) {
    const std::string field = "tasks[" + std::to_string(idx++) + "]";
    if (!e.is_object()) throw ParseError("task field '" + field + "': expected an object");
    for (const char* k : {"scenario", "start", "goal"}) {
      if (!e.contains(k)) {
        throw ParseError("task field '" + field + "." + k + "': missing");
      }
    }
    EvalTask task;
    task.scenario_path = (base / e["scenario"].get<std::string>()).string();
    const auto& st = e["start"];
    const auto& gl = e["goal"];
    if (!st.is_array() || st.size() != 3) {
      throw ParseError("task field '" + field + ".start': expected [x, y, heading]");
    }
    if (!gl.is_array() || gl.size() != 2) {
      throw ParseError("task field '" + field + ".goal': expected [x, y]");
    }
    task.start = {st[0].get<double>(), st[1].get<double>()};
    task.heading = st[2].get<double>();
    task.goal = {gl[0].get<double>(), gl[1].get<double>()};
    if (e.contains("t_max")) task.t_max = e["t_max"].get<int>();
    if (task.t_max < 1) throw ValidationError("task field '" + field + ".t_max': must be >= 1");

    if (!cache.count(task.scenario_path)) {
      cache.emplace(task.scenario_path, load_scenario(task.scenario_path));
    }
    const Scenario& scen = cache.at(task.scenario_path);
    if (collision_check(scen, task.start, cfg.robot_radius)) {
      throw ValidationError("task field '" + field + ".start': not collision-free");
    }
    if (collision_check(scen, task.goal, cfg.robot_radius)) {
      throw ValidationError("task field '" + field + ".goal': not collision-free");
    }
    out.push_back(task);
  }
  return out;
}

namespace {

TaskResult run_task(const Mlp& policy, const EvalTask& task, const Scenario& scen,
                    const EpisodeConfig& cfg, const NormLimits& limits) {
  TaskResult res;
  RobotState robot;
  robot.position = task.start;
  robot.heading = wrap_angle(task.heading);
  robot.radius = cfg.robot_radius;

  EpisodeConfig ep = cfg;
  ep.max_steps = task.t_max;

  StateVector sv = sense(scen, robot, task.goal);
  res.trajectory.push_back(
      {0.0, robot.position, robot.heading, robot.v, robot.omega, sv.goal_dist});
  Terminal term = Terminal::none;
  int steps = 0;
  while (term == Terminal::none) {
    const StateVector obs = scale_observation(sv, 1.0, limits);
    const auto x = normalize(obs, limits);
    const auto a = deterministic_action(policy, x);
    const auto [v, omega] = map_action(a, ep);
    robot = step_kinematics(robot, v, omega, ep.dt);
    ++steps;
    term = check_terminal(robot, task.goal, scen, ep, 1.0, steps);
    sv = sense(scen, robot, task.goal);
    res.trajectory.push_back(
        {steps * ep.dt, robot.position, robot.heading, robot.v, robot.omega, sv.goal_dist});
  }
  res.outcome = term;
  res.steps = steps;
  res.task_score = score(term == Terminal::goal, steps, task.t_max);
  return res;
}

void write_trajectory(const std::string& path, const TaskResult& res) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trajectory file '" + path + "'");
  out << "t,x,y,theta,v,omega,d_g\n";
  char line[256];
  for (const TrajectoryPoint& p : res.trajectory) {
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", p.t, p.position.x,
                  p.position.y, p.heading, p.v, p.omega, p.goal_dist);
    out << line;
  }
}

}  // namespace

EvalReport run_eval(const Mlp& policy, const std::vector<EvalTask>& tasks,
                    const EpisodeConfig& cfg, const NormLimits& limits,
                    const std::string& out_dir) {
  EvalReport report;
  std::map<std::string, Scenario> cache;
  for (const EvalTask& task : tasks) {
    if (!cache.count(task.scenario_path)) {
      cache.emplace(task.scenario_path, load_scenario(task.scenario_path));
    }
    report.tasks.push_back(run_task(policy, task, cache.at(task.scenario_path), cfg, limits));
  }
  double sum = 0.0;
  int successes = 0;
  for (const TaskResult& r : report.tasks) {
    sum += r.task_score;
    if (r.outcome == Terminal::goal) ++successes;
  }
  report.mean_score = report.tasks.empty() ? 0.0 : sum / static_cast<double>(report.tasks.size());
  report.success_rate =
      report.tasks.empty() ? 0.0 : static_cast<double>(successes) / report.tasks.size();

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    json jr;
    jr["mean_score"] = report.mean_score;
    jr["success_rate"] = report.success_rate;
    jr["tasks"] = json::array();
    for (size_t i = 0; i < report.tasks.size(); ++i) {
      const TaskResult& r = report.tasks[i];
      write_trajectory(out_dir + "/task_" + std::to_string(i) + ".csv", r);
      jr["tasks"].push_back({{"scenario", tasks[i].scenario_path},
                             {"outcome", terminal_name(r.outcome)},
                             {"steps", r.steps},
                             {"score", r.task_score}});
    }
    std::ofstream out(out_dir + "/report.json");
    if (!out) throw std::runtime_error("cannot write report under '" + out_dir + "'");
    out << jr.dump(2) << "\n";
  }
  return report;
}

}  // namespace scenav
