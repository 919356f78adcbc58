#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "scenav/random.hpp"

namespace scenav {

enum class Activation { relu, tanh_act };

/// Dense row-major matrix of doubles.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> d;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), d(static_cast<size_t>(r) * static_cast<size_t>(c), 0.0) {}

  double& operator()(int r, int c) { return d[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return d[static_cast<size_t>(r) * cols + c]; }
  double* row(int r) { return d.data() + static_cast<size_t>(r) * cols; }
  const double* row(int r) const { return d.data() + static_cast<size_t>(r) * cols; }
};

struct Layer {
  int in = 0;
  int out = 0;
  std::vector<double> w;  // [out][in] row-major
  std::vector<double> b;  // [out]
};

/// Multilayer perceptron: affine + hidden nonlinearity per hidden layer,
/// linear output head. Optional inverted dropout after each hidden
/// activation (active only when a training rng is passed to forward).
struct Mlp {
  std::vector<Layer> layers;
  Activation hidden_act = Activation::relu;
  double dropout_rate = 0.0;

  /// Fan-in-scaled uniform init: w ~ U(-1/sqrt(in), 1/sqrt(in)), b = 0.
  static Mlp make(const std::vector<int>& sizes, Rng& rng, Activation act = Activation::relu);

  int input_size() const { return layers.front().in; }
  int output_size() const { return layers.back().out; }
  std::vector<int> layer_sizes() const;
  size_t param_count() const;
};

/// State saved by forward() for backward(): the input of every layer (the
/// previous layer's activation) plus dropout masks when active.
struct ForwardCache {
  std::vector<Mat> inputs;
  std::vector<Mat> masks;
  Mat output;
};

Mat forward(const Mlp& net, const Mat& x, ForwardCache* cache = nullptr,
            Rng* dropout_rng = nullptr);
std::vector<double> forward(const Mlp& net, std::span<const double> x);

struct Grads {
  std::vector<std::vector<double>> w;
  std::vector<std::vector<double>> b;

  static Grads zeros_like(const Mlp& net);
  void zero();
};

/// Reverse-mode gradients of the cached forward pass. Accumulates into
/// grads (caller zeroes) and returns the gradient w.r.t. the input batch.
Mat backward(const Mlp& net, const ForwardCache& cache, const Mat& dout, Grads& grads);

/// Adaptive-moment optimizer state (bias-corrected update).
struct AdamState {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<std::vector<double>> mw, vw, mb, vb;

  static AdamState like(const Mlp& net, double lr);
};

/// One optimizer step. Throws TrainingError on non-finite gradients.
void adam_step(Mlp& net, const Grads& g, AdamState& opt);

/// target = (1 - tau) * target + tau * online, elementwise.
void soft_update(Mlp& target, const Mlp& online, double tau);

/// Scalar loss with optional analytic parameter gradients.
using LossProbe = std::function<double(const Mlp&, Grads*)>;

/// Compare analytic gradients against central finite differences on at least
/// min_params randomly chosen parameters; returns the worst relative error.
/// Gradient pairs below 1e-8 in magnitude compare equal.
double gradient_check(Mlp& net, const LossProbe& loss, Rng& rng, int min_params = 100,
                      double h = 1e-5);

}  // namespace scenav
