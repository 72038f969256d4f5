#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "khopsim/graph.hpp"
#include "khopsim/matrix.hpp"
#include "khopsim/rng.hpp"

namespace khopsim {

/// Stochastic block model configuration. Blocks are contiguous index ranges
/// (node i belongs to block floor(i*c/n)), approximately balanced.
struct SbmConfig {
  int n = 300;
  int num_classes = 2;
  double p_intra = 0.5;
  double p_inter = 0.1;
  int feature_dim = 1024;
  double feature_variance = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (num_classes < 2) {
      throw std::invalid_argument("SbmConfig: num_classes must be >= 2");
    }
    if (n < num_classes) {
      throw std::invalid_argument("SbmConfig: n must be >= num_classes");
    }
    if (p_intra < 0.0 || p_intra > 1.0 || p_inter < 0.0 || p_inter > 1.0) {
      throw std::invalid_argument("SbmConfig: probabilities must be in [0,1]");
    }
    if (feature_dim < 1) {
      throw std::invalid_argument("SbmConfig: feature_dim must be >= 1");
    }
    if (!(feature_variance > 0.0)) {
      throw std::invalid_argument("SbmConfig: feature_variance must be > 0");
    }
  }
};

inline std::vector<int> block_labels(int n, int num_classes) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    labels[static_cast<std::size_t>(i)] = static_cast<int>(
        (static_cast<long long>(i) * num_classes) / n);
  }
  return labels;
}

/// Samples an SBM graph. Every unordered pair is visited in fixed (i, j)
/// order and consumes exactly one engine draw, so the output is a pure
/// function of the config.
inline std::pair<Graph, std::vector<int>> generate_sbm(const SbmConfig& cfg) {
  cfg.validate();
  const std::vector<int> labels = block_labels(cfg.n, cfg.num_classes);
  Graph g(cfg.n);
  RngEngine rng = make_engine(cfg.seed);
  for (int i = 0; i < cfg.n; ++i) {
    for (int j = i + 1; j < cfg.n; ++j) {
      const double p = labels[static_cast<std::size_t>(i)] ==
                               labels[static_cast<std::size_t>(j)]
                           ? cfg.p_intra
                           : cfg.p_inter;
      if (uniform_unit(rng) < p) g.add_edge(i, j);
    }
  }
  return {std::move(g), labels};
}

/// Gaussian class-conditioned features: row i ~ N(label_i * 1, variance * I).
inline DenseMatrix generate_features(const std::vector<int>& labels, int dim,
                                     double variance, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("generate_features: dim must be >= 1");
  if (!(variance > 0.0)) {
    throw std::invalid_argument("generate_features: variance must be > 0");
  }
  const int n = static_cast<int>(labels.size());
  const double sigma = std::sqrt(variance);
  DenseMatrix features(n, dim);
  RngEngine rng = make_engine(seed);
  GaussianSampler gauss(rng);
  for (int i = 0; i < n; ++i) {
    const double mean = static_cast<double>(labels[static_cast<std::size_t>(i)]);
    double* row = features.row(i);
    for (int j = 0; j < dim; ++j) {
      row[j] = mean + sigma * gauss();
    }
  }
  return features;
}

struct SplitFractions {
  double train = 0.6;
  double val = 0.2;
  double test = 0.2;

  void validate() const {
    if (!(train > 0.0 && val > 0.0 && test > 0.0)) {
      throw std::invalid_argument("SplitFractions: fractions must be positive");
    }
    if (std::abs(train + val + test - 1.0) > 1e-9) {
      throw std::invalid_argument("SplitFractions: fractions must sum to 1");
    }
  }
};

/// Disjoint, exhaustive node masks (1 = member).
struct Masks {
  std::vector<std::uint8_t> train;
  std::vector<std::uint8_t> val;
  std::vector<std::uint8_t> test;
};

/// Stratified random split: each class's nodes are shuffled and divided by
/// largest-remainder quotas, so per-class counts are exact up to rounding and
/// the masks always partition the node set.
inline Masks split_dataset(const std::vector<int>& labels,
                           const SplitFractions& fractions,
                           std::uint64_t seed) {
  fractions.validate();
  const std::size_t n = labels.size();
  int num_classes = 0;
  for (const int label : labels) {
    if (label + 1 > num_classes) num_classes = label + 1;
  }

  Masks masks;
  masks.train.assign(n, 0);
  masks.val.assign(n, 0);
  masks.test.assign(n, 0);

  RngEngine rng = make_engine(seed);
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == c) members.push_back(static_cast<int>(i));
    }
    shuffle_in_place(members, rng);

    const int count = static_cast<int>(members.size());
    const double quotas[3] = {fractions.train * count, fractions.val * count,
                              fractions.test * count};
    int take[3];
    double remainder[3];
    int assigned = 0;
    for (int s = 0; s < 3; ++s) {
      take[s] = static_cast<int>(quotas[s]);
      remainder[s] = quotas[s] - take[s];
      assigned += take[s];
    }
    // Hand leftover nodes to the largest remainders (ties: train, val, test).
    for (int left = count - assigned; left > 0; --left) {
      int best = 0;
      for (int s = 1; s < 3; ++s) {
        if (remainder[s] > remainder[best]) best = s;
      }
      ++take[best];
      remainder[best] = -1.0;
    }

    int cursor = 0;
    for (int s = 0; s < 3; ++s) {
      std::vector<std::uint8_t>& mask =
          s == 0 ? masks.train : (s == 1 ? masks.val : masks.test);
      for (int t = 0; t < take[s]; ++t) {
        mask[static_cast<std::size_t>(members[static_cast<std::size_t>(cursor++)])] = 1;
      }
    }
  }
  return masks;
}

/// One node-classification problem: topology, features, labels and split.
struct Dataset {
  Graph graph;
  DenseMatrix features;
  std::vector<int> labels;
  Masks masks;

  int num_nodes() const { return graph.num_nodes(); }

  int num_classes() const {
    int c = 0;
    for (const int label : labels) {
      if (label + 1 > c) c = label + 1;
    }
    return c;
  }
};

/// Full synthetic dataset from one config. Graph, features and split draw
/// from independent substreams of cfg.seed.
inline Dataset make_dataset(const SbmConfig& cfg,
                            const SplitFractions& fractions = {}) {
  Dataset ds;
  auto [graph, labels] = generate_sbm(cfg);
  ds.graph = std::move(graph);
  ds.labels = std::move(labels);
  ds.features = generate_features(ds.labels, cfg.feature_dim,
                                  cfg.feature_variance, mix_seed(cfg.seed, 1));
  ds.masks = split_dataset(ds.labels, fractions, mix_seed(cfg.seed, 2));
  return ds;
}

}  // namespace khopsim
