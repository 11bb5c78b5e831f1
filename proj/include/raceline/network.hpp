// Copyright 2026 The Raceline Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "raceline/error.hpp"
#include "raceline/random.hpp"
#include "raceline/windows.hpp"

namespace raceline::nn {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

enum class Activation { Sigmoid, HardSigmoid };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

/// Default hidden layer sizes.
inline const std::vector<int> kDefaultHidden{450, 200, 200};

/// Huber delta, Nadam hyperparameters and the minibatch schedule.
struct TrainConfig {
  double huber_delta = 1.0;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  int batch_size = 256;
  int epochs = 100;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(huber_delta > 0.0 && learning_rate > 0.0 && epsilon > 0.0) || batch_size < 1 || epochs < 1) {
      throw Error(Errc::InvalidConfig, "training parameters must be positive");
    }
    if (!(beta1 > 0.0 && beta1 < 1.0 && beta2 > 0.0 && beta2 < 1.0)) {
      throw Error(Errc::InvalidConfig, "beta1 and beta2 must lie in (0, 1)");
    }
  }
};

/// Window layout the model was trained on.
struct ModelMeta {
  int foresight = 0;
  int sampling = 0;
  double l_ref = kDefaultLengthRef;
  double spacing = 5.0;
  std::string feature_ordering{kFeatureOrdering};
  TrainConfig training;
};

template <typename Scalar>
struct Layer {
  Matrix<Scalar> weight;  // out x in
  Vector<Scalar> bias;
  Activation activation = Activation::Sigmoid;
};

template <typename Scalar>
struct Mlp {
  std::vector<Layer<Scalar>> layers;
  ModelMeta meta;

  int input_size() const { return layers.empty() ? 0 : static_cast<int>(layers.front().weight.cols()); }
  int output_size() const { return layers.empty() ? 0 : static_cast<int>(layers.back().weight.rows()); }

  std::vector<int> layer_sizes() const {
    std::vector<int> sizes;
    if (layers.empty()) return sizes;
    sizes.push_back(input_size());
    for (const auto& l : layers) sizes.push_back(static_cast<int>(l.weight.rows()));
    return sizes;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
    return n;
  }
};

// ---------------------------------------------------------------------------
// Activations

template <typename Derived>
auto sigmoid(const Eigen::ArrayBase<Derived>& z) {
  using S = typename Derived::Scalar;
  return (S(1) + (-z).exp()).inverse();
}

template <typename Derived>
auto hard_sigmoid(const Eigen::ArrayBase<Derived>& z) {
  using S = typename Derived::Scalar;
  return (S(0.2) * z + S(0.5)).max(S(0)).min(S(1));
}

template <typename Scalar>
  requires std::is_floating_point_v<Scalar>
Scalar hard_sigmoid(Scalar z) {
  return std::clamp(Scalar(0.2) * z + Scalar(0.5), Scalar(0), Scalar(1));
}

template <typename Scalar>
void apply_activation(Activation a, Matrix<Scalar>& z) {
  if (a == Activation::Sigmoid) {
    z = sigmoid(z.array()).matrix();
  } else {
    z = hard_sigmoid(z.array()).matrix();
  }
}

/// Derivative expressed through the pre-activation z and activation value y.
template <typename Scalar>
Matrix<Scalar> activation_derivative(Activation a, const Matrix<Scalar>& z, const Matrix<Scalar>& y) {
  if (a == Activation::Sigmoid) return (y.array() * (Scalar(1) - y.array())).matrix();
  const auto lin = Scalar(0.2) * z.array() + Scalar(0.5);
  return ((lin > Scalar(0)) && (lin < Scalar(1))).template cast<Scalar>().matrix() * Scalar(0.2);
}

// ---------------------------------------------------------------------------
// Construction

/// Sigmoid hidden layers and a hard-sigmoid output. Weights are uniform in
/// +-sqrt(6 / (fan_in + fan_out)), biases zero.
template <typename Scalar>
Mlp<Scalar> make_mlp(const std::vector<int>& sizes, std::uint64_t seed, ModelMeta meta = {}) {
  if (sizes.size() < 2) throw Error(Errc::ShapeMismatch, "an MLP needs at least input and output sizes");
  for (int s : sizes) {
    if (s < 1) throw Error(Errc::ShapeMismatch, "layer sizes must be positive");
  }
  std::mt19937_64 rng(seed);
  Mlp<Scalar> model;
  model.meta = std::move(meta);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    Layer<Scalar> layer;
    const int in = sizes[l];
    const int out = sizes[l + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    layer.weight.resize(out, in);
    for (int r = 0; r < out; ++r) {
      for (int c = 0; c < in; ++c) layer.weight(r, c) = static_cast<Scalar>((2.0 * uniform01(rng) - 1.0) * limit);
    }
    layer.bias = Vector<Scalar>::Zero(out);
    layer.activation = l + 2 == sizes.size() ? Activation::HardSigmoid : Activation::Sigmoid;
    model.layers.push_back(std::move(layer));
  }
  return model;
}

/// Input 3(2f+1), the given hidden sizes, output 2s+1.
template <typename Scalar>
Mlp<Scalar> make_window_mlp(const WindowSpec& spec, const std::vector<int>& hidden, std::uint64_t seed,
                            double spacing = 5.0) {
  std::vector<int> sizes{spec.input_size()};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(spec.output_size());
  ModelMeta meta;
  meta.foresight = spec.foresight;
  meta.sampling = spec.sampling;
  meta.l_ref = spec.l_ref;
  meta.spacing = spacing;
  return make_mlp<Scalar>(sizes, seed, meta);
}

template <typename Scalar>
void check_shapes(const Mlp<Scalar>& model) {
  if (model.layers.empty()) throw Error(Errc::ShapeMismatch, "model has no layers");
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    const auto& layer = model.layers[l];
    if (layer.bias.size() != layer.weight.rows()) throw Error(Errc::ShapeMismatch, "bias size mismatch");
    if (l > 0 && layer.weight.cols() != model.layers[l - 1].weight.rows()) {
      throw Error(Errc::ShapeMismatch, "layer sizes do not chain");
    }
  }
}

// ---------------------------------------------------------------------------
// Forward pass

/// Column-wise evaluation: `inputs` is input_size x batch. A column-vector
/// input yields a column-vector output.
template <typename Scalar, typename Derived>
auto forward(const Mlp<Scalar>& model, const Eigen::MatrixBase<Derived>& inputs) {
  if (inputs.rows() != model.input_size()) throw Error(Errc::ShapeMismatch, "input length does not match model");
  Matrix<Scalar> a = inputs;
  for (const auto& layer : model.layers) {
    Matrix<Scalar> z = layer.weight * a;
    z.colwise() += layer.bias;
    apply_activation(layer.activation, z);
    a.swap(z);
  }
  if constexpr (Derived::ColsAtCompileTime == 1) {
    return Vector<Scalar>(a.col(0));
  } else {
    return a;
  }
}

// ---------------------------------------------------------------------------
// Loss

template <typename Scalar>
struct HuberValue {
  Scalar loss;
  Scalar grad;
};

/// 0.5 r^2 inside |r| <= delta, delta (|r| - delta / 2) outside.
template <typename Scalar>
HuberValue<Scalar> huber(Scalar r, Scalar delta) {
  const Scalar a = std::abs(r);
  if (a <= delta) return {Scalar(0.5) * r * r, r};
  return {delta * (a - Scalar(0.5) * delta), r > Scalar(0) ? delta : -delta};
}

// ---------------------------------------------------------------------------
// Backward pass

template <typename Scalar>
struct Gradients {
  std::vector<Matrix<Scalar>> weight;
  std::vector<Vector<Scalar>> bias;

  static Gradients zeros_like(const Mlp<Scalar>& model) {
    Gradients g;
    for (const auto& l : model.layers) {
      g.weight.push_back(Matrix<Scalar>::Zero(l.weight.rows(), l.weight.cols()));
      g.bias.push_back(Vector<Scalar>::Zero(l.bias.size()));
    }
    return g;
  }
};

/// Mean Huber loss over every output of every column, and its exact gradient
/// with respect to all weights and biases.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar backward(const Mlp<Scalar>& model, const Eigen::MatrixBase<DerivedX>& inputs,
                const Eigen::MatrixBase<DerivedY>& targets, Scalar delta, Gradients<Scalar>& grads) {
  const std::size_t depth = model.layers.size();
  if (inputs.rows() != model.input_size() || targets.rows() != model.output_size() ||
      inputs.cols() != targets.cols() || inputs.cols() == 0) {
    throw Error(Errc::ShapeMismatch, "inputs/targets do not match model");
  }
  std::vector<Matrix<Scalar>> pre(depth);
  std::vector<Matrix<Scalar>> act(depth + 1);
  act[0] = inputs;
  for (std::size_t l = 0; l < depth; ++l) {
    const auto& layer = model.layers[l];
    pre[l] = layer.weight * act[l];
    pre[l].colwise() += layer.bias;
    act[l + 1] = pre[l];
    apply_activation(layer.activation, act[l + 1]);
  }

  const Scalar scale = Scalar(1) / static_cast<Scalar>(targets.size());
  Matrix<Scalar> residual = act[depth] - targets;
  Scalar loss = 0;
  Matrix<Scalar> d_out(residual.rows(), residual.cols());
  for (Eigen::Index c = 0; c < residual.cols(); ++c) {
    for (Eigen::Index r = 0; r < residual.rows(); ++r) {
      const auto h = huber(residual(r, c), delta);
      loss += h.loss;
      d_out(r, c) = h.grad * scale;
    }
  }

  if (grads.weight.size() != depth) grads = Gradients<Scalar>::zeros_like(model);
  Matrix<Scalar> d = (d_out.array() *
                      activation_derivative(model.layers[depth - 1].activation, pre[depth - 1], act[depth]).array())
                         .matrix();
  for (std::size_t l = depth; l-- > 0;) {
    grads.weight[l].noalias() = d * act[l].transpose();
    grads.bias[l] = d.rowwise().sum();
    if (l > 0) {
      Matrix<Scalar> back = model.layers[l].weight.transpose() * d;
      d = (back.array() * activation_derivative(model.layers[l - 1].activation, pre[l - 1], act[l]).array()).matrix();
    }
  }
  return loss * scale;
}

/// Mean Huber loss without gradients.
template <typename Scalar, typename DerivedX, typename DerivedY>
Scalar mean_loss(const Mlp<Scalar>& model, const Eigen::MatrixBase<DerivedX>& inputs,
                 const Eigen::MatrixBase<DerivedY>& targets, Scalar delta) {
  const Matrix<Scalar> out = forward(model, inputs);
  Scalar loss = 0;
  for (Eigen::Index i = 0; i < out.size(); ++i) loss += huber(out(i) - targets(i), delta).loss;
  return loss / static_cast<Scalar>(out.size());
}

// ---------------------------------------------------------------------------
// Nadam

template <typename Scalar>
struct NadamState {
  std::vector<Matrix<Scalar>> m_weight, v_weight;
  std::vector<Vector<Scalar>> m_bias, v_bias;
  long step = 0;

  static NadamState zeros_like(const Mlp<Scalar>& model) {
    NadamState s;
    for (const auto& l : model.layers) {
      s.m_weight.push_back(Matrix<Scalar>::Zero(l.weight.rows(), l.weight.cols()));
      s.v_weight.push_back(Matrix<Scalar>::Zero(l.weight.rows(), l.weight.cols()));
      s.m_bias.push_back(Vector<Scalar>::Zero(l.bias.size()));
      s.v_bias.push_back(Vector<Scalar>::Zero(l.bias.size()));
    }
    return s;
  }
};

/// Bias-correction factors for step t (already incremented).
struct NadamCoefficients {
  double momentum_next;  // beta1 / (1 - beta1^(t+1))
  double gradient_now;   // (1 - beta1) / (1 - beta1^t)
  double second_moment;  // 1 / (1 - beta2^t)

  static NadamCoefficients at(long t, double beta1, double beta2) {
    const auto td = static_cast<double>(t);
    return {beta1 / (1.0 - std::pow(beta1, td + 1.0)), (1.0 - beta1) / (1.0 - std::pow(beta1, td)),
            1.0 / (1.0 - std::pow(beta2, td))};
  }
};

/// Updates one parameter block in place with its moments.
template <typename Param, typename Moment, typename Grad>
void nadam_update(Eigen::MatrixBase<Param>& param, Eigen::MatrixBase<Moment>& m, Eigen::MatrixBase<Moment>& v,
                  const Eigen::MatrixBase<Grad>& g, const NadamCoefficients& c, const TrainConfig& cfg) {
  using S = typename Param::Scalar;
  const S b1 = static_cast<S>(cfg.beta1);
  const S b2 = static_cast<S>(cfg.beta2);
  m = b1 * m + (S(1) - b1) * g;
  v = b2 * v + (S(1) - b2) * g.cwiseProduct(g);
  const auto m_hat = static_cast<S>(c.momentum_next) * m.array() + static_cast<S>(c.gradient_now) * g.array();
  const auto v_hat = static_cast<S>(c.second_moment) * v.array();
  param.array() -= static_cast<S>(cfg.learning_rate) * m_hat / (v_hat.sqrt() + static_cast<S>(cfg.epsilon));
}

template <typename Scalar>
void nadam_step(NadamState<Scalar>& state, Mlp<Scalar>& model, const Gradients<Scalar>& grads,
                const TrainConfig& cfg) {
  const std::size_t depth = model.layers.size();
  if (state.m_weight.size() != depth || grads.weight.size() != depth) {
    throw Error(Errc::ShapeMismatch, "optimizer state does not match model");
  }
  for (std::size_t l = 0; l < depth; ++l) {
    if (state.m_weight[l].rows() != model.layers[l].weight.rows() ||
        state.m_weight[l].cols() != model.layers[l].weight.cols() ||
        grads.weight[l].rows() != model.layers[l].weight.rows() ||
        grads.weight[l].cols() != model.layers[l].weight.cols() ||
        grads.bias[l].size() != model.layers[l].bias.size()) {
      throw Error(Errc::ShapeMismatch, "optimizer state does not match model");
    }
  }
  ++state.step;
  const auto c = NadamCoefficients::at(state.step, cfg.beta1, cfg.beta2);
  for (std::size_t l = 0; l < depth; ++l) {
    nadam_update(model.layers[l].weight, state.m_weight[l], state.v_weight[l], grads.weight[l], c, cfg);
    nadam_update(model.layers[l].bias, state.m_bias[l], state.v_bias[l], grads.bias[l], c, cfg);
  }
}

// ---------------------------------------------------------------------------
// Training

struct EpochReport {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = std::nan("");
  double val_mae = std::nan("");  // in waypoint fractions
};

struct TrainHistory {
  std::vector<EpochReport> epochs;
};

struct Dataset {
  Eigen::MatrixXd inputs;   // features x windows
  Eigen::MatrixXd targets;  // outputs x windows

  Eigen::Index size() const { return inputs.cols(); }

  static Dataset from_windows(std::span<const Window> windows) {
    return {feature_matrix(windows), target_matrix(windows)};
  }
};

/// Minibatch Nadam on shuffled windows. Each epoch's train_loss is the mean of
/// the minibatch losses (weighted by batch size) seen during that epoch.
template <typename Scalar>
TrainHistory train(Mlp<Scalar>& model, const Dataset& data, const TrainConfig& cfg, const Dataset* validation = nullptr,
                   const std::function<void(const EpochReport&)>& on_epoch = {}) {
  cfg.validate();
  check_shapes(model);
  if (data.size() == 0) throw Error(Errc::EmptyDataset, "no training windows");
  if (data.inputs.rows() != model.input_size() || data.targets.rows() != model.output_size() ||
      data.targets.cols() != data.inputs.cols()) {
    throw Error(Errc::ShapeMismatch, "dataset does not match model dimensions");
  }
  const Matrix<Scalar> x_all = data.inputs.template cast<Scalar>();
  const Matrix<Scalar> y_all = data.targets.template cast<Scalar>();
  Matrix<Scalar> x_val, y_val;
  if (validation != nullptr && validation->size() > 0) {
    x_val = validation->inputs.template cast<Scalar>();
    y_val = validation->targets.template cast<Scalar>();
  }

  model.meta.training = cfg;
  std::mt19937_64 rng(cfg.seed);
  auto state = NadamState<Scalar>::zeros_like(model);
  auto grads = Gradients<Scalar>::zeros_like(model);
  const auto delta = static_cast<Scalar>(cfg.huber_delta);
  const Eigen::Index n = data.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;

  TrainHistory history;
  Matrix<Scalar> xb, yb;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_with(order, rng);
    double loss_sum = 0.0;
    for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
      const Eigen::Index len = std::min<Eigen::Index>(cfg.batch_size, n - start);
      xb.resize(x_all.rows(), len);
      yb.resize(y_all.rows(), len);
      for (Eigen::Index k = 0; k < len; ++k) {
        const auto src = order[static_cast<std::size_t>(start + k)];
        xb.col(k) = x_all.col(src);
        yb.col(k) = y_all.col(src);
      }
      const Scalar loss = backward(model, xb, yb, delta, grads);
      loss_sum += static_cast<double>(loss) * static_cast<double>(len);
      nadam_step(state, model, grads, cfg);
    }
    EpochReport report;
    report.epoch = epoch + 1;
    report.train_loss = loss_sum / static_cast<double>(n);
    if (x_val.cols() > 0) {
      const Matrix<Scalar> out = forward(model, x_val);
      double l = 0.0;
      double mae = 0.0;
      for (Eigen::Index i = 0; i < out.size(); ++i) {
        const Scalar r = out(i) - y_val(i);
        l += static_cast<double>(huber(r, delta).loss);
        mae += std::abs(static_cast<double>(r));
      }
      report.val_loss = l / static_cast<double>(out.size());
      report.val_mae = mae / static_cast<double>(out.size());
    }
    history.epochs.push_back(report);
    if (on_epoch) on_epoch(report);
  }
  return history;
}

// ---------------------------------------------------------------------------
// Model file

/// Versioned text format: header, metadata lines, then per layer a shape line,
/// one line per weight row and a bias line, terminated by `end`.
inline constexpr int kModelFormatVersion = 1;

std::string save_model_text(const Mlp<double>& model);
Mlp<double> load_model_text(std::string_view text);

void save_model(const Mlp<double>& model, const std::string& path);
Mlp<double> load_model(const std::string& path);

/// Throws Error(VersionMismatch) unless the model was built for this window
/// layout, and Error(IncompatibleModel) if its layer shapes disagree with it.
void require_window_config(const ModelMeta& meta, int foresight, int sampling, double l_ref);
void check_window_shapes(const Mlp<double>& model);

std::string describe(const Mlp<double>& model);

}  // namespace raceline::nn
