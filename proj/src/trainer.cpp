#include "scenav/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "scenav/checkpoint.hpp"
#include "scenav/errors.hpp"

namespace scenav {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

TrainResult train(const RunConfig& cfg, const TrainHooks& hooks) {
  validate_run_config(cfg);
  const Scenario scenario = load_scenario(cfg.scenario_path);
  std::vector<EvalTask> tasks;
  if (!cfg.tasks_path.empty()) tasks = load_tasks(cfg.tasks_path, cfg.episode);

  Rng rng_world(derive_seed(cfg.seed, "world"));
  Rng rng_rho(derive_seed(cfg.seed, "rho"));
  Rng rng_policy(derive_seed(cfg.seed, "policy"));
  Rng rng_replay(derive_seed(cfg.seed, "replay"));
  Rng rng_init(derive_seed(cfg.seed, "init"));

  long step = 0;
  long episode = 0;
  NetworkBundle nets = [&] {
    if (cfg.resume_path.empty()) return NetworkBundle::make(cfg.sac, rng_init);
    Checkpoint ck = load_checkpoint(cfg.resume_path);
    step = ck.step;
    episode = ck.episode;
    // Layer sizes come from the checkpoint; remaining hyperparameters from
    // the run configuration.
    SacConfig merged = cfg.sac;
    merged.hidden = ck.nets.cfg.hidden;
    ck.nets.cfg = merged;
    ck.nets.policy_opt.lr = merged.lr;
    ck.nets.value_opt.lr = merged.lr;
    ck.nets.q1_opt.lr = merged.lr;
    ck.nets.q2_opt.lr = merged.lr;
    return std::move(ck.nets);
  }();

  ReplayBuffer buffer(cfg.sac.replay_capacity);

  fs::create_directories(cfg.out_dir);
  const std::string metrics_path = cfg.out_dir + "/metrics.csv";
  const bool fresh = cfg.resume_path.empty() || !fs::exists(metrics_path);
  std::ofstream metrics(metrics_path, fresh ? std::ios::out : std::ios::app);
  if (!metrics) throw std::runtime_error("cannot write metric log '" + metrics_path + "'");
  if (fresh) {
    metrics << "step,episode,rho,return,length,terminal,q1_loss,q2_loss,v_loss,policy_loss,"
               "eval_score\n";
  }

  long next_eval = (step / cfg.eval_interval + 1) * cfg.eval_interval;
  double last_eval_score = std::nan("");
  double last_eval_success = std::nan("");

  auto evaluate_and_checkpoint = [&] {
    save_checkpoint(cfg.out_dir + "/ckpt_" + std::to_string(step) + ".bin", nets, cfg.seed, step,
                    episode);
    if (!tasks.empty()) {
      const EvalReport rep = run_eval(nets.policy, tasks, cfg.episode, cfg.limits);
      last_eval_score = rep.mean_score;
      last_eval_success = rep.success_rate;
    }
  };

  while (step < cfg.total_steps) {
    ++episode;
    const double rho = sample_rho(rng_rho, cfg.augment);
    if (hooks.on_episode_start) hooks.on_episode_start(episode, rho);

    auto [robot, goal] = reset_episode(scenario, cfg.episode, rng_world, rho);
    StateVector s_img = scale_observation(sense(scenario, robot, goal), rho, cfg.limits);
    std::array<double, kStateDim> x = normalize(s_img, cfg.limits);

    const bool warmup = episode <= cfg.sac.warmup_episodes;
    EpisodeStats stats;
    stats.episode = episode;
    stats.rho = rho;
    Terminal term = Terminal::none;
    int t = 0;
    while (term == Terminal::none && step < cfg.total_steps) {
      std::array<double, 2> a;
      if (warmup) {
        const auto [v, omega] = pid_policy(s_img.goal_dist, s_img.goal_angle, cfg.episode);
        a = unmap_action(v, omega, cfg.episode);
      } else {
        a = sample_action(nets.policy, x, rng_policy, cfg.sac).action;
      }
      const auto [v_img, omega_img] = map_action(a, cfg.episode);
      const auto [v_sim, omega_sim] = scale_action(v_img, omega_img, rho);

      robot = step_kinematics(robot, v_sim, omega_sim, cfg.episode.dt);
      ++t;
      ++step;
      term = check_terminal(robot, goal, scenario, cfg.episode, rho, t);

      const StateVector s2_sim = sense(scenario, robot, goal);
      const StateVector s2_img = scale_observation(s2_sim, rho, cfg.limits);
      const std::array<double, kStateDim> x2 = normalize(s2_img, cfg.limits);

      const double r = step_reward(cfg.reward, s_img.goal_dist, s2_img.goal_dist, term);
      Transition tr{x, a, r, x2, terminal_done_flag(term)};
      buffer.store(tr);
      if (hooks.on_store) hooks.on_store(s2_sim, rho, tr);

      stats.episode_return += r;
      s_img = s2_img;
      x = x2;
    }
    stats.length = t;
    stats.outcome = term;
    stats.step_end = step;

    // Update phase: one minibatch per tick, critics every tick, the policy
    // on even ticks, soft target update after each critic step.
    double q1_sum = 0.0, q2_sum = 0.0, v_sum = 0.0, p_sum = 0.0;
    for (int tick = 1; tick <= t; ++tick) {
      const ReplayBuffer::Batch batch = buffer.sample(cfg.sac.batch_size, rng_replay);
      const CriticLosses cl = critic_update(nets, batch, rng_policy);
      soft_update(nets.value_target, nets.value, cfg.sac.tau);
      ++stats.critic_updates;
      q1_sum += cl.q1;
      q2_sum += cl.q2;
      v_sum += cl.value;
      if (tick % 2 == 0) {
        p_sum += policy_update(nets, batch, rng_policy);
        ++stats.policy_updates;
      }
    }
    if (stats.critic_updates > 0) {
      stats.q1_loss = q1_sum / stats.critic_updates;
      stats.q2_loss = q2_sum / stats.critic_updates;
      stats.value_loss = v_sum / stats.critic_updates;
    }
    if (stats.policy_updates > 0) stats.policy_loss = p_sum / stats.policy_updates;

    if (step >= next_eval) {
      evaluate_and_checkpoint();
      next_eval = (step / cfg.eval_interval + 1) * cfg.eval_interval;
    }

    metrics << stats.step_end << ',' << stats.episode << ',' << fmt(stats.rho) << ','
            << fmt(stats.episode_return) << ',' << stats.length << ','
            << terminal_name(stats.outcome) << ',' << fmt(stats.q1_loss) << ','
            << fmt(stats.q2_loss) << ',' << fmt(stats.value_loss) << ','
            << fmt(stats.policy_loss) << ',' << fmt(last_eval_score) << '\n';

    if (hooks.on_episode_end) hooks.on_episode_end(stats);
    if (hooks.stop_after_episode && hooks.stop_after_episode(stats)) break;
  }
  metrics.flush();

  TrainResult result;
  result.total_steps = step;
  result.episodes = episode;
  result.final_checkpoint = cfg.out_dir + "/ckpt_final.bin";
  save_checkpoint(result.final_checkpoint, nets, cfg.seed, step, episode);
  if (!tasks.empty()) {
    const EvalReport rep =
        run_eval(nets.policy, tasks, cfg.episode, cfg.limits, cfg.out_dir + "/final_eval");
    result.final_eval_score = rep.mean_score;
    result.final_eval_success = rep.success_rate;
  } else {
    result.final_eval_score = last_eval_score;
    result.final_eval_success = last_eval_success;
  }
  return result;
}

}  // namespace scenav
