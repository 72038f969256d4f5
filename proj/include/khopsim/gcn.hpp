#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "khopsim/graph.hpp"
#include "khopsim/matrix.hpp"
#include "khopsim/rng.hpp"
#include "khopsim/sbm.hpp"

namespace khopsim {

/// Symmetric renormalized propagation operator with self-loops:
/// A_hat = D~^{-1/2} (A + I) D~^{-1/2}, where D~ is the degree matrix of
/// A + I. An isolated node keeps a unit self-entry.
inline DenseMatrix normalize_adjacency(const Graph& g) {
  const int n = g.num_nodes();
  std::vector<double> inv_sqrt_degree(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* row = g.row(i);
    int degree = 1;  // self-loop
    for (int j = 0; j < n; ++j) degree += row[j];
    inv_sqrt_degree[static_cast<std::size_t>(i)] =
        1.0 / std::sqrt(static_cast<double>(degree));
  }
  DenseMatrix a_hat(n, n);
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* row = g.row(i);
    double* out = a_hat.row(i);
    const double di = inv_sqrt_degree[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      const double aij = (i == j) ? 1.0 : static_cast<double>(row[j]);
      if (aij != 0.0) out[j] = aij * di * inv_sqrt_degree[static_cast<std::size_t>(j)];
    }
  }
  return a_hat;
}

/// Layer weights of an L-layer GCN, W^(1)..W^(L); consecutive dimensions
/// chain (cols of W^(l) == rows of W^(l+1)).
struct GcnParams {
  std::vector<DenseMatrix> layers;

  int depth() const { return static_cast<int>(layers.size()); }

  std::vector<int> dims() const {
    std::vector<int> d;
    if (layers.empty()) return d;
    d.push_back(layers.front().rows());
    for (const DenseMatrix& w : layers) d.push_back(w.cols());
    return d;
  }
};

struct TrainConfig {
  double learning_rate = 0.01;
  int max_epochs = 200;
  int patience = 50;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  int depth = 2;
  int hidden_units = 32;

  void validate() const {
    if (!(learning_rate > 0.0)) {
      throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
    }
    if (max_epochs < 0) {
      throw std::invalid_argument("TrainConfig: max_epochs must be >= 0");
    }
    if (patience < 1 || patience > (max_epochs > 0 ? max_epochs : patience)) {
      throw std::invalid_argument(
          "TrainConfig: patience must be in [1, max_epochs]");
    }
    if (depth < 1) throw std::invalid_argument("TrainConfig: depth must be >= 1");
    if (hidden_units < 1) {
      throw std::invalid_argument("TrainConfig: hidden_units must be >= 1");
    }
  }
};

/// Glorot-uniform initialization, W^(l) ~ U(+-sqrt(6/(fan_in+fan_out))).
inline GcnParams init_params(int input_dim, int hidden_units, int num_classes,
                             int depth, std::uint64_t seed) {
  if (depth < 1) throw std::invalid_argument("init_params: depth must be >= 1");
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int l = 1; l < depth; ++l) dims.push_back(hidden_units);
  dims.push_back(num_classes);

  GcnParams params;
  RngEngine rng = make_engine(seed);
  for (int l = 0; l < depth; ++l) {
    const int fan_in = dims[static_cast<std::size_t>(l)];
    const int fan_out = dims[static_cast<std::size_t>(l) + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    DenseMatrix w(fan_in, fan_out);
    for (double& x : w.data()) {
      x = (2.0 * uniform_unit(rng) - 1.0) * limit;
    }
    params.layers.push_back(std::move(w));
  }
  return params;
}

/// Everything the backward pass needs from one forward pass:
///   aggregated[l] = A_hat * H^(l)        (input to layer l+1's weights)
///   pre_activation[l] = aggregated[l] * W^(l+1)
///   activations[l] = H^(l), with H^(0) = X and hidden H^(l) = ReLU(pre).
/// logits == pre_activation of the last layer (no output activation).
struct ForwardTrace {
  std::vector<DenseMatrix> activations;
  std::vector<DenseMatrix> aggregated;
  std::vector<DenseMatrix> pre_activation;

  const DenseMatrix& logits() const { return pre_activation.back(); }
};

inline ForwardTrace gcn_forward(const GcnParams& params,
                                const DenseMatrix& a_hat,
                                const DenseMatrix& x) {
  if (params.layers.empty()) {
    throw std::invalid_argument("gcn_forward: no layers");
  }
  if (a_hat.rows() != x.rows() || a_hat.rows() != a_hat.cols()) {
    throw std::invalid_argument("gcn_forward: adjacency/feature shape mismatch");
  }
  if (params.layers.front().rows() != x.cols()) {
    throw std::invalid_argument("gcn_forward: feature dimension mismatch");
  }
  const int depth = params.depth();
  ForwardTrace trace;
  trace.activations.push_back(x);
  for (int l = 0; l < depth; ++l) {
    const DenseMatrix agg = multiply(a_hat, trace.activations.back());
    DenseMatrix pre = multiply(agg, params.layers[static_cast<std::size_t>(l)]);
    trace.aggregated.push_back(agg);
    if (l + 1 < depth) {
      trace.activations.push_back(relu(pre));
    }
    trace.pre_activation.push_back(std::move(pre));
  }
  return trace;
}

/// Row-wise numerically stable softmax.
inline DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix probs(logits.rows(), logits.cols());
  for (int i = 0; i < logits.rows(); ++i) {
    const double* in = logits.row(i);
    double* out = probs.row(i);
    double max_logit = in[0];
    for (int j = 1; j < logits.cols(); ++j) {
      if (in[j] > max_logit) max_logit = in[j];
    }
    double total = 0.0;
    for (int j = 0; j < logits.cols(); ++j) {
      out[j] = std::exp(in[j] - max_logit);
      total += out[j];
    }
    for (int j = 0; j < logits.cols(); ++j) out[j] /= total;
  }
  return probs;
}

struct LossResult {
  double loss = 0.0;
  DenseMatrix probabilities;
};

/// Mean negative log-likelihood over masked nodes, with stable softmax.
inline LossResult softmax_cross_entropy(const DenseMatrix& logits,
                                        const std::vector<int>& labels,
                                        const std::vector<std::uint8_t>& mask) {
  if (static_cast<int>(labels.size()) != logits.rows() ||
      static_cast<int>(mask.size()) != logits.rows()) {
    throw std::invalid_argument("softmax_cross_entropy: length mismatch");
  }
  LossResult result;
  result.probabilities = softmax_rows(logits);
  int masked = 0;
  double total = 0.0;
  for (int i = 0; i < logits.rows(); ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    ++masked;
    // log(p) computed from logits directly for stability.
    const double* in = logits.row(i);
    double max_logit = in[0];
    for (int j = 1; j < logits.cols(); ++j) {
      if (in[j] > max_logit) max_logit = in[j];
    }
    double denom = 0.0;
    for (int j = 0; j < logits.cols(); ++j) denom += std::exp(in[j] - max_logit);
    const int y = labels[static_cast<std::size_t>(i)];
    total += std::log(denom) - (in[y] - max_logit);
  }
  if (masked == 0) {
    throw std::invalid_argument("softmax_cross_entropy: empty mask");
  }
  result.loss = total / masked;
  return result;
}

/// Analytic gradient of softmax_cross_entropy(gcn_forward(.)) w.r.t. every
/// layer. ReLU's subgradient at 0 is taken as 0. A_hat is symmetric, so the
/// adjoint propagation reuses it directly.
inline std::vector<DenseMatrix> gradients(const GcnParams& params,
                                          const DenseMatrix& a_hat,
                                          const DenseMatrix& x,
                                          const std::vector<int>& labels,
                                          const std::vector<std::uint8_t>& mask) {
  const ForwardTrace trace = gcn_forward(params, a_hat, x);
  const DenseMatrix probs = softmax_rows(trace.logits());
  const int n = probs.rows();
  const int depth = params.depth();

  int masked = 0;
  for (const std::uint8_t m : mask) masked += m ? 1 : 0;
  if (masked == 0) throw std::invalid_argument("gradients: empty mask");

  // dL/dlogits = (P - Y) / |mask| on masked rows, zero elsewhere.
  DenseMatrix delta(n, probs.cols());
  for (int i = 0; i < n; ++i) {
    if (!mask[static_cast<std::size_t>(i)]) continue;
    const double* p = probs.row(i);
    double* d = delta.row(i);
    for (int j = 0; j < probs.cols(); ++j) d[j] = p[j] / masked;
    d[labels[static_cast<std::size_t>(i)]] -= 1.0 / masked;
  }

  std::vector<DenseMatrix> grads(static_cast<std::size_t>(depth));
  for (int l = depth - 1; l >= 0; --l) {
    grads[static_cast<std::size_t>(l)] = multiply_transpose_left(
        trace.aggregated[static_cast<std::size_t>(l)], delta);
    if (l == 0) break;
    // delta_{l-1} = (A_hat * delta_l * W_l^T) gated by ReLU'(pre_{l-1}).
    DenseMatrix back = multiply(
        a_hat, multiply_transpose_right(delta, params.layers[static_cast<std::size_t>(l)]));
    const DenseMatrix& pre = trace.pre_activation[static_cast<std::size_t>(l) - 1];
    for (int i = 0; i < back.rows(); ++i) {
      const double* z = pre.row(i);
      double* b = back.row(i);
      for (int j = 0; j < back.cols(); ++j) {
        if (z[j] <= 0.0) b[j] = 0.0;
      }
    }
    delta = std::move(back);
  }
  return grads;
}

/// First/second-moment accumulators for Adam, one per layer.
struct AdamState {
  std::vector<DenseMatrix> m;
  std::vector<DenseMatrix> v;
  long long step = 0;

  static AdamState zeros_like(const GcnParams& params) {
    AdamState state;
    for (const DenseMatrix& w : params.layers) {
      state.m.emplace_back(w.rows(), w.cols());
      state.v.emplace_back(w.rows(), w.cols());
    }
    return state;
  }
};

/// One Adam update with bias correction, in place.
inline void adam_step(AdamState& state, GcnParams& params,
                      const std::vector<DenseMatrix>& grads,
                      const TrainConfig& cfg) {
  if (grads.size() != params.layers.size()) {
    throw std::invalid_argument("adam_step: gradient/parameter count mismatch");
  }
  ++state.step;
  const double bias1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    std::vector<double>& w = params.layers[l].data();
    std::vector<double>& m = state.m[l].data();
    std::vector<double>& v = state.v[l].data();
    const std::vector<double>& g = grads[l].data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg.adam_beta1 * m[i] + (1.0 - cfg.adam_beta1) * g[i];
      v[i] = cfg.adam_beta2 * v[i] + (1.0 - cfg.adam_beta2) * g[i] * g[i];
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      w[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
    }
  }
}

/// argmax with ties broken toward the lowest class index.
inline std::vector<int> argmax_rows(const DenseMatrix& m) {
  std::vector<int> out(static_cast<std::size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) {
    const double* row = m.row(i);
    int best = 0;
    for (int j = 1; j < m.cols(); ++j) {
      if (row[j] > row[best]) best = j;
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

struct Prediction {
  std::vector<int> labels;
  DenseMatrix probabilities;
};

inline Prediction predict(const GcnParams& params, const DenseMatrix& a_hat,
                          const DenseMatrix& x) {
  const ForwardTrace trace = gcn_forward(params, a_hat, x);
  Prediction pred;
  pred.probabilities = softmax_rows(trace.logits());
  pred.labels = argmax_rows(pred.probabilities);
  return pred;
}

/// Outcome of one training run: parameters from the best-validation epoch,
/// full-graph predictions and probabilities, loss curves, test accuracy.
struct RunResult {
  GcnParams params;
  std::vector<int> predictions;
  DenseMatrix probabilities;
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  double test_accuracy = 0.0;
  int best_epoch = 0;
};

/// Full-batch training with Adam and early stopping on validation loss.
/// Epoch 0 is the untouched initialization; training stops after `patience`
/// epochs without validation improvement or at max_epochs, and the returned
/// parameters are those of the best-validation epoch.
inline RunResult train(const Dataset& dataset, const TrainConfig& cfg) {
  cfg.validate();
  const int num_classes = dataset.num_classes();
  const DenseMatrix a_hat = normalize_adjacency(dataset.graph);

  GcnParams params = init_params(dataset.features.cols(), cfg.hidden_units,
                                 num_classes, cfg.depth, cfg.seed);
  AdamState state = AdamState::zeros_like(params);

  RunResult result;
  GcnParams best = params;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;

  const auto evaluate = [&](const GcnParams& p) {
    const ForwardTrace trace = gcn_forward(p, a_hat, dataset.features);
    const double train_loss =
        softmax_cross_entropy(trace.logits(), dataset.labels, dataset.masks.train)
            .loss;
    const double val_loss =
        softmax_cross_entropy(trace.logits(), dataset.labels, dataset.masks.val)
            .loss;
    return std::make_pair(train_loss, val_loss);
  };

  auto [train0, val0] = evaluate(params);
  result.train_loss.push_back(train0);
  result.val_loss.push_back(val0);
  best_val = val0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const std::vector<DenseMatrix> grads =
        gradients(params, a_hat, dataset.features, dataset.labels,
                  dataset.masks.train);
    adam_step(state, params, grads, cfg);

    auto [train_loss, val_loss] = evaluate(params);
    result.train_loss.push_back(train_loss);
    result.val_loss.push_back(val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      best = params;
      best_epoch = epoch;
    }
    if (epoch - best_epoch >= cfg.patience) break;
  }

  result.params = std::move(best);
  result.best_epoch = best_epoch;
  Prediction pred = predict(result.params, a_hat, dataset.features);
  result.predictions = std::move(pred.labels);
  result.probabilities = std::move(pred.probabilities);

  int correct = 0;
  int test_count = 0;
  for (std::size_t i = 0; i < dataset.labels.size(); ++i) {
    if (!dataset.masks.test[i]) continue;
    ++test_count;
    if (result.predictions[i] == dataset.labels[i]) ++correct;
  }
  result.test_accuracy =
      test_count > 0 ? static_cast<double>(correct) / test_count : 0.0;
  return result;
}

}  // namespace khopsim
