#pragma once

#include <array>
#include <utility>
#include <vector>

#include "scenav/kinematics.hpp"
#include "scenav/mlp.hpp"
#include "scenav/perception.hpp"

namespace scenav {

/// Replay record. States are normalized imagined-space vectors; the action
/// is the squashed policy output before velocity mapping.
struct Transition {
  std::array<double, kStateDim> state;
  std::array<double, 2> action;
  double reward = 0.0;
  std::array<double, kStateDim> next_state;
  bool done = false;  // true for goal/collision, false for timeout
};

/// The stored terminal flag: timeouts keep bootstrapping.
inline bool terminal_done_flag(Terminal t) {
  return t == Terminal::goal || t == Terminal::collision;
}

class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);

  void store(const Transition& t);
  size_t size() const { return items_.size(); }
  size_t capacity() const { return capacity_; }
  const Transition& at(size_t i) const { return items_[i]; }

  struct Batch {
    Mat s;
    Mat a;
    Mat s2;
    std::vector<double> r;
    std::vector<double> done;
  };

  /// Uniform over stored items, with replacement.
  Batch sample(int batch_size, Rng& rng) const;

 private:
  size_t capacity_;
  size_t next_ = 0;  // overwrite position once full
  std::vector<Transition> items_;
};

struct SacConfig {
  double gamma = 0.99;
  double tau = 0.005;
  double alpha = 0.02;  // fixed entropy coefficient
  double lr = 3e-4;
  int batch_size = 256;
  size_t replay_capacity = 200000;
  std::vector<int> hidden{256, 256, 256};
  double log_std_min = -20.0;
  double log_std_max = 2.0;
  int warmup_episodes = 100;
  double dropout_rate = 0.0;
};

/// Policy (outputs mu and log sigma per action dim), state-value net with
/// target, and twin Q-functions, each with optimizer state.
struct NetworkBundle {
  Mlp policy, value, value_target, q1, q2;
  AdamState policy_opt, value_opt, q1_opt, q2_opt;
  SacConfig cfg;

  static NetworkBundle make(const SacConfig& cfg, Rng& init_rng);
};

struct ActionSample {
  std::array<double, 2> action;  // in [-1,1]^2
  double log_prob = 0.0;
};

/// Squashed Gaussian draw a = tanh(mu + sigma*zeta) with the change-of-
/// variables log-density. log sigma is clamped before exponentiation.
ActionSample sample_action(const Mlp& policy, std::span<const double> state, Rng& rng,
                           const SacConfig& cfg);

/// Evaluation-time action tanh(mu).
std::array<double, 2> deterministic_action(const Mlp& policy, std::span<const double> state);

/// Affine map from the squashed action to executable velocities:
/// v = (a0+1)/2 * v_max, omega = a1 * omega_max.
std::pair<double, double> map_action(const std::array<double, 2>& a, const EpisodeConfig& cfg);

/// Clamped inverse of map_action (used to store warmup controller commands).
std::array<double, 2> unmap_action(double v, double omega, const EpisodeConfig& cfg);

struct CriticLosses {
  double q1 = 0.0;
  double q2 = 0.0;
  double value = 0.0;
};

/// One critic step: Q1/Q2 regress to r + gamma*(1-d)*V_target(s'), V
/// regresses to min Q(s, a~) - alpha*log pi(a~|s) with a fresh sampled
/// action. Targets are computed before any parameter step.
CriticLosses critic_update(NetworkBundle& nets, const ReplayBuffer::Batch& batch,
                           Rng& policy_rng);

/// One delayed policy step: minimize mean(alpha*log pi(a~|s) - min Q(s, a~))
/// through the reparameterized action.
double policy_update(NetworkBundle& nets, const ReplayBuffer::Batch& batch, Rng& policy_rng);

/// Policy-update objective with a fixed noise matrix; fills policy parameter
/// gradients when grads is non-null. Exposed for the gradient-check harness.
double policy_loss(const Mlp& policy, const Mlp& q1, const Mlp& q2, const SacConfig& cfg,
                   const Mat& states, const Mat& zeta, Grads* grads, Rng* dropout_rng = nullptr);

}  // namespace scenav
