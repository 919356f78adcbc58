#include "scenav/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "scenav/errors.hpp"

namespace scenav {

namespace {

// SIMD dot product; the vector width is fixed per binary, so results stay
// reproducible run to run.
inline double dot_span(const double* __restrict a, const double* __restrict b, int n) {
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

}  // namespace

Mlp Mlp::make(const std::vector<int>& sizes, Rng& rng, Activation act) {
  if (sizes.size() < 2) throw std::invalid_argument("Mlp::make: need at least input and output");
  Mlp net;
  net.hidden_act = act;
  for (size_t l = 0; l + 1 < sizes.size(); ++l) {
    if (sizes[l] < 1 || sizes[l + 1] < 1) {
      throw std::invalid_argument("Mlp::make: layer sizes must be positive");
    }
    Layer ly;
    ly.in = sizes[l];
    ly.out = sizes[l + 1];
    ly.w.resize(static_cast<size_t>(ly.in) * ly.out);
    ly.b.assign(static_cast<size_t>(ly.out), 0.0);
    const double limit = 1.0 / std::sqrt(static_cast<double>(ly.in));
    for (double& w : ly.w) w = rng.uniform(-limit, limit);
    net.layers.push_back(std::move(ly));
  }
  return net;
}

std::vector<int> Mlp::layer_sizes() const {
  std::vector<int> out;
  out.push_back(layers.front().in);
  for (const Layer& ly : layers) out.push_back(ly.out);
  return out;
}

size_t Mlp::param_count() const {
  size_t n = 0;
  for (const Layer& ly : layers) n += ly.w.size() + ly.b.size();
  return n;
}

Mat forward(const Mlp& net, const Mat& x, ForwardCache* cache, Rng* dropout_rng) {
  if (x.cols != net.input_size()) {
    throw std::invalid_argument("forward: input width " + std::to_string(x.cols) +
                                " does not match layer 0 size " +
                                std::to_string(net.input_size()));
  }
  const int n_layers = static_cast<int>(net.layers.size());
  const bool dropout = dropout_rng != nullptr && net.dropout_rate > 0.0;
  if (cache) {
    cache->inputs.clear();
    cache->masks.clear();
  }
  Mat cur = x;
  for (int l = 0; l < n_layers; ++l) {
    const Layer& ly = net.layers[l];
    if (cache) cache->inputs.push_back(cur);
    Mat next(cur.rows, ly.out);
    for (int r = 0; r < cur.rows; ++r) {
      const double* xr = cur.row(r);
      double* yr = next.row(r);
      for (int j = 0; j < ly.out; ++j) {
        yr[j] = dot_span(xr, &ly.w[static_cast<size_t>(j) * ly.in], ly.in) + ly.b[j];
      }
    }
    if (l + 1 < n_layers) {
      if (net.hidden_act == Activation::relu) {
        for (double& v : next.d) v = v > 0.0 ? v : 0.0;
      } else {
        for (double& v : next.d) v = std::tanh(v);
      }
      if (dropout) {
        Mat mask(next.rows, next.cols);
        const double keep = 1.0 - net.dropout_rate;
        const double scale = 1.0 / keep;
        for (size_t i = 0; i < mask.d.size(); ++i) {
          mask.d[i] = dropout_rng->uniform() < keep ? scale : 0.0;
          next.d[i] *= mask.d[i];
        }
        if (cache) cache->masks.push_back(std::move(mask));
      }
    }
    cur = std::move(next);
  }
  if (cache) cache->output = cur;
  return cur;
}

std::vector<double> forward(const Mlp& net, std::span<const double> x) {
  Mat m(1, static_cast<int>(x.size()));
  for (size_t i = 0; i < x.size(); ++i) m.d[i] = x[i];
  Mat y = forward(net, m);
  return y.d;
}

Grads Grads::zeros_like(const Mlp& net) {
  Grads g;
  for (const Layer& ly : net.layers) {
    g.w.emplace_back(ly.w.size(), 0.0);
    g.b.emplace_back(ly.b.size(), 0.0);
  }
  return g;
}

void Grads::zero() {
  for (auto& v : w) std::fill(v.begin(), v.end(), 0.0);
  for (auto& v : b) std::fill(v.begin(), v.end(), 0.0);
}

Mat backward(const Mlp& net, const ForwardCache& cache, const Mat& dout, Grads& grads) {
  const int n_layers = static_cast<int>(net.layers.size());
  if (static_cast<int>(cache.inputs.size()) != n_layers) {
    throw std::invalid_argument("backward: cache does not match network depth");
  }
  if (dout.cols != net.output_size() || dout.rows != cache.inputs.front().rows) {
    throw std::invalid_argument("backward: output gradient shape mismatch");
  }
  Mat dz = dout;
  for (int l = n_layers - 1; l >= 0; --l) {
    const Layer& ly = net.layers[l];
    const Mat& xin = cache.inputs[static_cast<size_t>(l)];
    auto& dw = grads.w[static_cast<size_t>(l)];
    auto& db = grads.b[static_cast<size_t>(l)];
    Mat dx(xin.rows, ly.in);
    for (int r = 0; r < xin.rows; ++r) {
      const double* dzr = dz.row(r);
      const double* xr = xin.row(r);
      double* dxr = dx.row(r);
      for (int j = 0; j < ly.out; ++j) {
        const double g = dzr[j];
        if (g == 0.0) continue;
        db[j] += g;
        double* __restrict dwj = &dw[static_cast<size_t>(j) * ly.in];
        const double* __restrict wj = &ly.w[static_cast<size_t>(j) * ly.in];
#pragma omp simd
        for (int k = 0; k < ly.in; ++k) {
          dwj[k] += g * xr[k];
          dxr[k] += g * wj[k];
        }
      }
    }
    if (l > 0) {
      // through the previous layer's activation; xin holds its outputs
      if (net.hidden_act == Activation::relu) {
        for (size_t i = 0; i < dx.d.size(); ++i) {
          if (xin.d[i] <= 0.0) dx.d[i] = 0.0;
        }
      } else {
        for (size_t i = 0; i < dx.d.size(); ++i) dx.d[i] *= 1.0 - xin.d[i] * xin.d[i];
      }
      if (!cache.masks.empty()) {
        const Mat& mask = cache.masks[static_cast<size_t>(l - 1)];
        for (size_t i = 0; i < dx.d.size(); ++i) dx.d[i] *= mask.d[i];
      }
    }
    dz = std::move(dx);
  }
  return dz;
}

AdamState AdamState::like(const Mlp& net, double lr) {
  AdamState s;
  s.lr = lr;
  for (const Layer& ly : net.layers) {
    s.mw.emplace_back(ly.w.size(), 0.0);
    s.vw.emplace_back(ly.w.size(), 0.0);
    s.mb.emplace_back(ly.b.size(), 0.0);
    s.vb.emplace_back(ly.b.size(), 0.0);
  }
  return s;
}

namespace {

void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m,
                 std::vector<double>& v, const AdamState& opt, double c1, double c2,
                 const char* what) {
  for (size_t i = 0; i < p.size(); ++i) {
    const double gi = g[i];
    if (!std::isfinite(gi)) {
      throw TrainingError(std::string("adam_step: non-finite gradient in ") + what);
    }
    m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * gi;
    v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * gi * gi;
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    p[i] -= opt.lr * mhat / (std::sqrt(vhat) + opt.eps);
  }
}

}  // namespace

void adam_step(Mlp& net, const Grads& g, AdamState& opt) {
  opt.step += 1;
  const double c1 = 1.0 - std::pow(opt.beta1, static_cast<double>(opt.step));
  const double c2 = 1.0 - std::pow(opt.beta2, static_cast<double>(opt.step));
  for (size_t l = 0; l < net.layers.size(); ++l) {
    adam_update(net.layers[l].w, g.w[l], opt.mw[l], opt.vw[l], opt, c1, c2, "weights");
    adam_update(net.layers[l].b, g.b[l], opt.mb[l], opt.vb[l], opt, c1, c2, "biases");
  }
}

void soft_update(Mlp& target, const Mlp& online, double tau) {
  for (size_t l = 0; l < target.layers.size(); ++l) {
    Layer& t = target.layers[l];
    const Layer& o = online.layers[l];
    for (size_t i = 0; i < t.w.size(); ++i) t.w[i] = (1.0 - tau) * t.w[i] + tau * o.w[i];
    for (size_t i = 0; i < t.b.size(); ++i) t.b[i] = (1.0 - tau) * t.b[i] + tau * o.b[i];
  }
}

namespace {

double* param_at(Mlp& net, size_t idx) {
  for (Layer& ly : net.layers) {
    if (idx < ly.w.size()) return &ly.w[idx];
    idx -= ly.w.size();
    if (idx < ly.b.size()) return &ly.b[idx];
    idx -= ly.b.size();
  }
  throw std::out_of_range("param_at");
}

double grad_at(const Grads& g, size_t idx) {
  for (size_t l = 0; l < g.w.size(); ++l) {
    if (idx < g.w[l].size()) return g.w[l][idx];
    idx -= g.w[l].size();
    if (idx < g.b[l].size()) return g.b[l][idx];
    idx -= g.b[l].size();
  }
  throw std::out_of_range("grad_at");
}

}  // namespace

double gradient_check(Mlp& net, const LossProbe& loss, Rng& rng, int min_params, double h) {
  Grads analytic = Grads::zeros_like(net);
  loss(net, &analytic);
  const size_t n = net.param_count();
  double worst = 0.0;
  for (int i = 0; i < min_params; ++i) {
    const size_t idx = static_cast<size_t>(rng.next_u64() % n);
    double* p = param_at(net, idx);
    const double orig = *p;
    *p = orig + h;
    const double lp = loss(net, nullptr);
    *p = orig - h;
    const double lm = loss(net, nullptr);
    *p = orig;
    const double fd = (lp - lm) / (2.0 * h);
    const double an = grad_at(analytic, idx);
    const double denom = std::max(std::abs(fd), std::abs(an));
    if (denom < 1e-8) continue;  // both effectively zero
    worst = std::max(worst, std::abs(fd - an) / denom);
  }
  return worst;
}

}  // namespace scenav
