#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "scenav/checkpoint.hpp"
#include "scenav/errors.hpp"
#include "scenav/trainer.hpp"
#include "scenav/verify.hpp"

namespace {

using namespace scenav;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct TrainFlags {
  std::string config;
  std::string scenario;
  std::string tasks;
  std::string reward;
  std::string resume;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> augment_p;
  std::optional<double> augment_m;
  std::optional<long> steps;
  std::optional<long> eval_interval;
};

int cmd_train(const TrainFlags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_run_config(f.config);
  if (!f.scenario.empty()) cfg.scenario_path = f.scenario;
  if (!f.tasks.empty()) cfg.tasks_path = f.tasks;
  if (!f.resume.empty()) cfg.resume_path = f.resume;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.augment_p) cfg.augment.p = *f.augment_p;
  if (f.augment_m) cfg.augment.m = *f.augment_m;
  if (f.steps) cfg.total_steps = *f.steps;
  if (f.eval_interval) cfg.eval_interval = *f.eval_interval;
  if (!f.reward.empty()) {
    if (f.reward == "dense") {
      cfg.reward.kind = RewardConfig::Kind::dense;
    } else if (f.reward == "sparse") {
      cfg.reward.kind = RewardConfig::Kind::sparse;
    } else {
      throw ValidationError("--reward must be 'dense' or 'sparse'");
    }
  }
  validate_run_config(cfg);

  const TrainResult res = train(cfg);
  std::printf("trained %ld steps over %ld episodes\n", res.total_steps, res.episodes);
  if (!cfg.tasks_path.empty()) {
    std::printf("final eval: mean score %.4f, success rate %.2f\n", res.final_eval_score,
                res.final_eval_success);
  }
  std::printf("final checkpoint: %s\n", res.final_checkpoint.c_str());
  return kExitOk;
}

int cmd_eval(const std::string& ckpt_path, const std::string& tasks_path,
             const std::string& out_dir, const std::string& config_path) {
  EpisodeConfig episode;
  NormLimits limits;
  if (!config_path.empty()) {
    const RunConfig cfg = load_run_config(config_path);
    episode = cfg.episode;
    limits = cfg.limits;
  }
  const Checkpoint ck = load_checkpoint(ckpt_path);
  const std::vector<EvalTask> tasks = load_tasks(tasks_path, episode);
  const EvalReport rep = run_eval(ck.nets.policy, tasks, episode, limits, out_dir);
  for (size_t i = 0; i < rep.tasks.size(); ++i) {
    const TaskResult& r = rep.tasks[i];
    std::printf("task %zu: %s steps=%d score=%.4f\n", i, terminal_name(r.outcome), r.steps,
                r.task_score);
  }
  std::printf("mean score: %.4f  success rate: %.2f\n", rep.mean_score, rep.success_rate);
  return kExitOk;
}

int cmd_gradcheck(std::uint64_t seed) {
  const GradCheckReport rep = run_gradcheck(SacConfig{}, seed);
  std::printf("policy mlp:        %.3e\n", rep.policy_err);
  std::printf("value mlp:         %.3e\n", rep.value_err);
  std::printf("q mlp:             %.3e\n", rep.q_err);
  std::printf("policy objective:  %.3e\n", rep.policy_path_err);
  std::printf("worst relative error: %.3e (tolerance %.1e)\n", rep.worst(), kGradCheckTolerance);
  if (rep.worst() >= kGradCheckTolerance) {
    std::fprintf(stderr, "gradient check FAILED\n");
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_geom_bench(const std::string& scenario_path, long n_rays, std::uint64_t seed) {
  const Scenario s = load_scenario(scenario_path);
  Rng rng(derive_seed(seed, "geom-bench"));
  const double max_range = 30.0;
  auto random_origin = [&] {
    // keep a small margin so scaled copies stay strictly inside bounds
    const double mx = 1e-3 * s.bounds.width();
    const double my = 1e-3 * s.bounds.height();
    return Vec2{rng.uniform(s.bounds.xmin + mx, s.bounds.xmax - mx),
                rng.uniform(s.bounds.ymin + my, s.bounds.ymax - my)};
  };

  // Scale-equivariance audit before timing anything.
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec2 o = random_origin();
    const double angle = rng.uniform(-kPi, kPi);
    const double rho = rng.uniform(1.1, 4.0);
    const Scenario big = scaled(s, rho);
    const double base = raycast(s, o, angle, max_range);
    const double scaled_val = raycast(big, o * rho, angle, max_range * rho);
    if (std::abs(scaled_val - rho * base) > 1e-9 * std::max(1.0, rho * base)) {
      std::fprintf(stderr, "scale-equivariance violated: rho=%.6f base=%.12f scaled=%.12f\n",
                   rho, base, scaled_val);
      return kExitRuntime;
    }
  }
  std::printf("scale equivariance: ok (1000 random rays)\n");

  using clock = std::chrono::steady_clock;
  double sink = 0.0;
  auto t0 = clock::now();
  for (long i = 0; i < n_rays; ++i) {
    sink += raycast(s, random_origin(), rng.uniform(-kPi, kPi), max_range);
  }
  const double ray_secs = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("raycast: %ld rays in %.3f s -> %.3f Mray/s (checksum %.3f)\n", n_rays, ray_secs,
              n_rays / ray_secs / 1e6, sink);

  const long n_scans = std::max<long>(1, n_rays / kScanBeams);
  t0 = clock::now();
  for (long i = 0; i < n_scans; ++i) {
    const auto scan =
        lidar_scan(s, random_origin(), rng.uniform(-kPi, kPi), kScanFov, kScanBeams, max_range);
    sink += scan.front();
  }
  const double scan_secs = std::chrono::duration<double>(clock::now() - t0).count();
  std::printf("lidar_scan: %ld scans (%d beams) in %.3f s -> %.1f scans/s\n", n_scans, kScanBeams,
              scan_secs, n_scans / scan_secs);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenav: mapless-navigation training with scenario augmentation"};
  app.require_subcommand(1);

  TrainFlags tf;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a policy");
  train_cmd->add_option("--config", tf.config, "Run configuration file (JSON)");
  train_cmd->add_option("--scenario", tf.scenario, "Scenario file override");
  train_cmd->add_option("--tasks", tf.tasks, "Evaluation task suite override");
  train_cmd->add_option("--reward", tf.reward, "Reward kind: dense|sparse");
  train_cmd->add_option("--augment-p", tf.augment_p, "Augmentation probability threshold P");
  train_cmd->add_option("--augment-m", tf.augment_m, "Scaling factor upper bound M");
  train_cmd->add_option("--seed", tf.seed, "Master seed");
  train_cmd->add_option("--steps", tf.steps, "Total environment steps");
  train_cmd->add_option("--eval-interval", tf.eval_interval, "Steps between evaluations");
  train_cmd->add_option("--resume", tf.resume, "Checkpoint to continue from");
  train_cmd->add_option("--out", tf.out, "Output directory");

  std::string eval_ckpt, eval_tasks, eval_out = "eval_out", eval_config;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a task suite");
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint file")->required();
  eval_cmd->add_option("--tasks", eval_tasks, "Task suite file")->required();
  eval_cmd->add_option("--out", eval_out, "Report/trajectory output directory");
  eval_cmd->add_option("--config", eval_config, "Run configuration for episode limits");

  std::uint64_t gc_seed = 1;
  CLI::App* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient audit");
  gradcheck_cmd->add_option("--seed", gc_seed, "Seed");

  std::string gb_scenario;
  long gb_rays = 1000000;
  std::uint64_t gb_seed = 1;
  CLI::App* geom_cmd = app.add_subcommand("geom-bench", "Ray-casting throughput benchmark");
  geom_cmd->add_option("--scenario", gb_scenario, "Scenario file")->required();
  geom_cmd->add_option("--rays", gb_rays, "Number of rays to time")
      ->check(CLI::PositiveNumber);
  geom_cmd->add_option("--seed", gb_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(train_cmd)) return cmd_train(tf);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(eval_ckpt, eval_tasks, eval_out, eval_config);
    if (app.got_subcommand(gradcheck_cmd)) return cmd_gradcheck(gc_seed);
    if (app.got_subcommand(geom_cmd)) return cmd_geom_bench(gb_scenario, gb_rays, gb_seed);
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
