#include "scenav/verify.hpp"

#include <algorithm>

namespace scenav {

namespace {

// Mean squared output over a fixed batch; a smooth scalar probe that touches
// every parameter.
LossProbe squared_output_probe(const Mat& x) {
  return [x](const Mlp& net, Grads* grads) {
    ForwardCache cache;
    const Mat y = forward(net, x, grads ? &cache : nullptr);
    double loss = 0.0;
    for (double v : y.d) loss += v * v;
    loss /= 2.0 * y.rows;
    if (grads) {
      Mat dy(y.rows, y.cols);
      for (size_t i = 0; i < y.d.size(); ++i) dy.d[i] = y.d[i] / y.rows;
      backward(net, cache, dy, *grads);
    }
    return loss;
  };
}

Mat random_batch(Rng& rng, int rows, int cols) {
  Mat x(rows, cols);
  for (double& v : x.d) v = rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace

double GradCheckReport::worst() const {
  return std::max(std::max(policy_err, value_err), std::max(q_err, policy_path_err));
}

GradCheckReport run_gradcheck(const SacConfig& cfg, std::uint64_t seed) {
  Rng init(derive_seed(seed, "gradcheck-init"));
  Rng data(derive_seed(seed, "gradcheck-data"));
  Rng pick(derive_seed(seed, "gradcheck-pick"));
  const int batch = 8;

  NetworkBundle nets = NetworkBundle::make(cfg, init);
  GradCheckReport report;

  {
    const Mat x = random_batch(data, batch, nets.policy.input_size());
    report.policy_err = gradient_check(nets.policy, squared_output_probe(x), pick);
  }
  {
    const Mat x = random_batch(data, batch, nets.value.input_size());
    report.value_err = gradient_check(nets.value, squared_output_probe(x), pick);
  }
  {
    const Mat x = random_batch(data, batch, nets.q1.input_size());
    report.q_err = gradient_check(nets.q1, squared_output_probe(x), pick);
  }
  {
    const Mat states = random_batch(data, batch, nets.policy.input_size());
    Mat zeta(batch, 2);
    for (double& z : zeta.d) z = data.normal();
    const Mlp& q1 = nets.q1;
    const Mlp& q2 = nets.q2;
    const SacConfig& c = nets.cfg;
    LossProbe probe = [&states, &zeta, &q1, &q2, &c](const Mlp& p, Grads* grads) {
      return policy_loss(p, q1, q2, c, states, zeta, grads);
    };
    report.policy_path_err = gradient_check(nets.policy, probe, pick);
  }
  return report;
}

}  // namespace scenav
