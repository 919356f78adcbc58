#include "scenav/sac.hpp"

#include <algorithm>
#include <cmath>

#include "scenav/errors.hpp"

namespace scenav {

namespace {

constexpr double kTanhEps = 1e-6;
constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

Mat hconcat(const Mat& a, const Mat& b) {
  Mat out(a.rows, a.cols + b.cols);
  for (int r = 0; r < a.rows; ++r) {
    double* o = out.row(r);
    const double* ar = a.row(r);
    const double* br = b.row(r);
    for (int c = 0; c < a.cols; ++c) o[c] = ar[c];
    for (int c = 0; c < b.cols; ++c) o[a.cols + c] = br[c];
  }
  return out;
}

}  // namespace

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
  items_.reserve(std::min<size_t>(capacity, 1 << 20));
}

void ReplayBuffer::store(const Transition& t) {
  if (items_.size() < capacity_) {
    items_.push_back(t);
  } else {
    items_[next_] = t;
    next_ = (next_ + 1) % capacity_;
  }
}

ReplayBuffer::Batch ReplayBuffer::sample(int batch_size, Rng& rng) const {
  if (items_.empty()) throw std::logic_error("ReplayBuffer::sample: buffer is empty");
  Batch b;
  b.s = Mat(batch_size, kStateDim);
  b.a = Mat(batch_size, 2);
  b.s2 = Mat(batch_size, kStateDim);
  b.r.resize(static_cast<size_t>(batch_size));
  b.done.resize(static_cast<size_t>(batch_size));
  for (int r = 0; r < batch_size; ++r) {
    const Transition& t = items_[static_cast<size_t>(rng.uniform_int(static_cast<int>(size())))];
    std::copy(t.state.begin(), t.state.end(), b.s.row(r));
    std::copy(t.next_state.begin(), t.next_state.end(), b.s2.row(r));
    b.a(r, 0) = t.action[0];
    b.a(r, 1) = t.action[1];
    b.r[static_cast<size_t>(r)] = t.reward;
    b.done[static_cast<size_t>(r)] = t.done ? 1.0 : 0.0;
  }
  return b;
}

NetworkBundle NetworkBundle::make(const SacConfig& cfg, Rng& init_rng) {
  NetworkBundle n;
  n.cfg = cfg;

  std::vector<int> policy_sizes{kStateDim};
  std::vector<int> value_sizes{kStateDim};
  std::vector<int> q_sizes{kStateDim + 2};
  for (int h : cfg.hidden) {
    policy_sizes.push_back(h);
    value_sizes.push_back(h);
    q_sizes.push_back(h);
  }
  policy_sizes.push_back(4);  // mu (2) and log sigma (2)
  value_sizes.push_back(1);
  q_sizes.push_back(1);

  n.policy = Mlp::make(policy_sizes, init_rng);
  n.value = Mlp::make(value_sizes, init_rng);
  n.q1 = Mlp::make(q_sizes, init_rng);
  n.q2 = Mlp::make(q_sizes, init_rng);
  n.policy.dropout_rate = cfg.dropout_rate;
  n.value.dropout_rate = cfg.dropout_rate;
  n.q1.dropout_rate = cfg.dropout_rate;
  n.q2.dropout_rate = cfg.dropout_rate;
  n.value_target = n.value;

  n.policy_opt = AdamState::like(n.policy, cfg.lr);
  n.value_opt = AdamState::like(n.value, cfg.lr);
  n.q1_opt = AdamState::like(n.q1, cfg.lr);
  n.q2_opt = AdamState::like(n.q2, cfg.lr);
  return n;
}

ActionSample sample_action(const Mlp& policy, std::span<const double> state, Rng& rng,
                           const SacConfig& cfg) {
  const std::vector<double> head = forward(policy, state);
  ActionSample out;
  double logp = 0.0;
  for (int j = 0; j < 2; ++j) {
    const double mu = head[static_cast<size_t>(j)];
    const double ls = std::clamp(head[static_cast<size_t>(2 + j)], cfg.log_std_min,
                                 cfg.log_std_max);
    const double sigma = std::exp(ls);
    const double zeta = rng.normal();
    const double a = std::tanh(mu + sigma * zeta);
    logp += -0.5 * zeta * zeta - ls - 0.5 * kLogTwoPi;
    logp -= std::log(1.0 - a * a + kTanhEps);
    out.action[static_cast<size_t>(j)] = a;
  }
  out.log_prob = logp;
  return out;
}

std::array<double, 2> deterministic_action(const Mlp& policy, std::span<const double> state) {
  const std::vector<double> head = forward(policy, state);
  return {std::tanh(head[0]), std::tanh(head[1])};
}

std::pair<double, double> map_action(const std::array<double, 2>& a, const EpisodeConfig& cfg) {
  return {0.5 * (a[0] + 1.0) * cfg.v_max, a[1] * cfg.omega_max};
}

std::array<double, 2> unmap_action(double v, double omega, const EpisodeConfig& cfg) {
  return {std::clamp(2.0 * v / cfg.v_max - 1.0, -1.0, 1.0),
          std::clamp(omega / cfg.omega_max, -1.0, 1.0)};
}

CriticLosses critic_update(NetworkBundle& nets, const ReplayBuffer::Batch& batch,
                           Rng& policy_rng) {
  const int b = batch.s.rows;
  const SacConfig& cfg = nets.cfg;
  Rng* drop = cfg.dropout_rate > 0.0 ? &policy_rng : nullptr;

  // Q regression targets from the target value network.
  const Mat v_next = forward(nets.value_target, batch.s2);
  std::vector<double> y_q(static_cast<size_t>(b));
  for (int r = 0; r < b; ++r) {
    y_q[static_cast<size_t>(r)] =
        batch.r[static_cast<size_t>(r)] +
        cfg.gamma * (1.0 - batch.done[static_cast<size_t>(r)]) * v_next(r, 0);
  }

  // Fresh sampled actions for the value target.
  const Mat head = forward(nets.policy, batch.s);
  Mat a_fresh(b, 2);
  std::vector<double> logp(static_cast<size_t>(b), 0.0);
  for (int r = 0; r < b; ++r) {
    for (int j = 0; j < 2; ++j) {
      const double mu = head(r, j);
      const double ls = std::clamp(head(r, 2 + j), cfg.log_std_min, cfg.log_std_max);
      const double sigma = std::exp(ls);
      const double zeta = policy_rng.normal();
      const double a = std::tanh(mu + sigma * zeta);
      logp[static_cast<size_t>(r)] += -0.5 * zeta * zeta - ls - 0.5 * kLogTwoPi;
      logp[static_cast<size_t>(r)] -= std::log(1.0 - a * a + kTanhEps);
      a_fresh(r, j) = a;
    }
  }

  const Mat sa = hconcat(batch.s, batch.a);
  const Mat sa_fresh = hconcat(batch.s, a_fresh);

  // All targets are computed against the pre-step parameter snapshot.
  ForwardCache cq1, cq2, cv;
  const Mat q1 = forward(nets.q1, sa, &cq1, drop);
  const Mat q2 = forward(nets.q2, sa, &cq2, drop);
  const Mat q1f = forward(nets.q1, sa_fresh);
  const Mat q2f = forward(nets.q2, sa_fresh);
  const Mat v = forward(nets.value, batch.s, &cv, drop);

  std::vector<double> y_v(static_cast<size_t>(b));
  for (int r = 0; r < b; ++r) {
    y_v[static_cast<size_t>(r)] =
        std::min(q1f(r, 0), q2f(r, 0)) - cfg.alpha * logp[static_cast<size_t>(r)];
  }

  CriticLosses losses;
  Mat dq1(b, 1), dq2(b, 1), dv(b, 1);
  for (int r = 0; r < b; ++r) {
    const double e1 = q1(r, 0) - y_q[static_cast<size_t>(r)];
    const double e2 = q2(r, 0) - y_q[static_cast<size_t>(r)];
    const double ev = v(r, 0) - y_v[static_cast<size_t>(r)];
    losses.q1 += e1 * e1;
    losses.q2 += e2 * e2;
    losses.value += ev * ev;
    dq1(r, 0) = 2.0 * e1 / b;
    dq2(r, 0) = 2.0 * e2 / b;
    dv(r, 0) = 2.0 * ev / b;
  }
  losses.q1 /= b;
  losses.q2 /= b;
  losses.value /= b;
  if (!std::isfinite(losses.q1 + losses.q2 + losses.value)) {
    throw TrainingError("critic_update: non-finite loss");
  }

  Grads g1 = Grads::zeros_like(nets.q1);
  Grads g2 = Grads::zeros_like(nets.q2);
  Grads gv = Grads::zeros_like(nets.value);
  backward(nets.q1, cq1, dq1, g1);
  backward(nets.q2, cq2, dq2, g2);
  backward(nets.value, cv, dv, gv);
  adam_step(nets.q1, g1, nets.q1_opt);
  adam_step(nets.q2, g2, nets.q2_opt);
  adam_step(nets.value, gv, nets.value_opt);
  return losses;
}

double policy_loss(const Mlp& policy, const Mlp& q1net, const Mlp& q2net, const SacConfig& cfg,
                   const Mat& states, const Mat& zeta, Grads* grads, Rng* dropout_rng) {
  const int b = states.rows;
  ForwardCache pc;
  const Mat head = forward(policy, states, grads ? &pc : nullptr, dropout_rng);

  Mat a(b, 2), sigma(b, 2), ls_raw(b, 2);
  std::vector<double> logp(static_cast<size_t>(b), 0.0);
  for (int r = 0; r < b; ++r) {
    for (int j = 0; j < 2; ++j) {
      const double mu = head(r, j);
      ls_raw(r, j) = head(r, 2 + j);
      const double ls = std::clamp(ls_raw(r, j), cfg.log_std_min, cfg.log_std_max);
      sigma(r, j) = std::exp(ls);
      const double av = std::tanh(mu + sigma(r, j) * zeta(r, j));
      a(r, j) = av;
      logp[static_cast<size_t>(r)] +=
          -0.5 * zeta(r, j) * zeta(r, j) - ls - 0.5 * kLogTwoPi;
      logp[static_cast<size_t>(r)] -= std::log(1.0 - av * av + kTanhEps);
    }
  }

  const Mat sa = hconcat(states, a);
  ForwardCache cq1, cq2;
  const Mat q1 = forward(q1net, sa, grads ? &cq1 : nullptr);
  const Mat q2 = forward(q2net, sa, grads ? &cq2 : nullptr);

  double loss = 0.0;
  for (int r = 0; r < b; ++r) {
    loss += cfg.alpha * logp[static_cast<size_t>(r)] - std::min(q1(r, 0), q2(r, 0));
  }
  loss /= b;
  if (!grads) return loss;

  // Route the Q gradient through whichever critic attains the minimum.
  Mat dq1(b, 1), dq2(b, 1);
  for (int r = 0; r < b; ++r) {
    if (q1(r, 0) <= q2(r, 0)) {
      dq1(r, 0) = -1.0 / b;
    } else {
      dq2(r, 0) = -1.0 / b;
    }
  }
  Grads gq1 = Grads::zeros_like(q1net);
  Grads gq2 = Grads::zeros_like(q2net);
  const Mat dsa1 = backward(q1net, cq1, dq1, gq1);
  const Mat dsa2 = backward(q2net, cq2, dq2, gq2);

  // Chain rule through a = tanh(mu + sigma*zeta) with zeta held fixed. The
  // Gaussian log-density term contributes only -1 per log sigma; its mu
  // dependence cancels under reparameterization.
  Mat dhead(b, 4);
  for (int r = 0; r < b; ++r) {
    for (int j = 0; j < 2; ++j) {
      const double av = a(r, j);
      double da = dsa1(r, kStateDim + j) + dsa2(r, kStateDim + j);
      da += (cfg.alpha / b) * (2.0 * av / (1.0 - av * av + kTanhEps));
      const double du = da * (1.0 - av * av);
      dhead(r, j) = du;
      double dls = du * sigma(r, j) * zeta(r, j) - cfg.alpha / b;
      if (ls_raw(r, j) < cfg.log_std_min || ls_raw(r, j) > cfg.log_std_max) dls = 0.0;
      dhead(r, 2 + j) = dls;
    }
  }
  backward(policy, pc, dhead, *grads);
  return loss;
}

double policy_update(NetworkBundle& nets, const ReplayBuffer::Batch& batch, Rng& policy_rng) {
  const int b = batch.s.rows;
  Mat zeta(b, 2);
  for (double& z : zeta.d) z = policy_rng.normal();
  Rng* drop = nets.cfg.dropout_rate > 0.0 ? &policy_rng : nullptr;

  Grads g = Grads::zeros_like(nets.policy);
  const double loss = policy_loss(nets.policy, nets.q1, nets.q2, nets.cfg, batch.s, zeta, &g, drop);
  if (!std::isfinite(loss)) throw TrainingError("policy_update: non-finite loss");
  adam_step(nets.policy, g, nets.policy_opt);
  return loss;
}

}  // namespace scenav
