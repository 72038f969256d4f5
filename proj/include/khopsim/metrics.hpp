#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "khopsim/gcn.hpp"

namespace khopsim {

/// Fraction of masked nodes where predicted == truth.
inline double accuracy(const std::vector<int>& predicted,
                       const std::vector<int>& truth,
                       const std::vector<std::uint8_t>& mask) {
  if (predicted.size() != truth.size() || predicted.size() != mask.size()) {
    throw std::invalid_argument("accuracy: length mismatch");
  }
  int total = 0;
  int correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (!mask[i]) continue;
    ++total;
    if (predicted[i] == truth[i]) ++correct;
  }
  if (total == 0) throw std::invalid_argument("accuracy: empty mask");
  return static_cast<double>(correct) / total;
}

/// Level of disagreement: fraction of ALL nodes whose predictions differ.
inline double disagreement(const std::vector<int>& pred1,
                           const std::vector<int>& pred2) {
  if (pred1.size() != pred2.size() || pred1.empty()) {
    throw std::invalid_argument("disagreement: need equal nonempty inputs");
  }
  std::size_t differing = 0;
  for (std::size_t i = 0; i < pred1.size(); ++i) {
    if (pred1[i] != pred2[i]) ++differing;
  }
  return static_cast<double>(differing) / static_cast<double>(pred1.size());
}

/// Mask-restricted variant of the disagreement metric (non-default; the
/// definition above uses the total node count).
inline double disagreement_masked(const std::vector<int>& pred1,
                                  const std::vector<int>& pred2,
                                  const std::vector<std::uint8_t>& mask) {
  if (pred1.size() != pred2.size() || pred1.size() != mask.size()) {
    throw std::invalid_argument("disagreement_masked: length mismatch");
  }
  std::size_t total = 0;
  std::size_t differing = 0;
  for (std::size_t i = 0; i < pred1.size(); ++i) {
    if (!mask[i]) continue;
    ++total;
    if (pred1[i] != pred2[i]) ++differing;
  }
  if (total == 0) throw std::invalid_argument("disagreement_masked: empty mask");
  return static_cast<double>(differing) / static_cast<double>(total);
}

/// Results of the two models trained on a graph and its k-hop-similar
/// counterpart (same features, labels and masks).
struct RunPair {
  RunResult original;
  RunResult khop;
};

/// Per-class probability mass of each model, averaged over the nodes where
/// the two models' predicted labels differ.
struct DisagreedProbProfile {
  std::vector<double> mean_original;
  std::vector<double> mean_khop;
  int disagreed_count = 0;
};

/// Empty optional when the models agree everywhere.
inline std::optional<DisagreedProbProfile> mean_probs_on_disagreed(
    const RunPair& pair) {
  const std::vector<int>& p1 = pair.original.predictions;
  const std::vector<int>& p2 = pair.khop.predictions;
  if (p1.size() != p2.size()) {
    throw std::invalid_argument("mean_probs_on_disagreed: node counts differ");
  }
  const int num_classes = pair.original.probabilities.cols();
  if (num_classes != pair.khop.probabilities.cols()) {
    throw std::invalid_argument("mean_probs_on_disagreed: class counts differ");
  }
  DisagreedProbProfile profile;
  profile.mean_original.assign(static_cast<std::size_t>(num_classes), 0.0);
  profile.mean_khop.assign(static_cast<std::size_t>(num_classes), 0.0);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    if (p1[i] == p2[i]) continue;
    ++profile.disagreed_count;
    const double* row1 = pair.original.probabilities.row(static_cast<int>(i));
    const double* row2 = pair.khop.probabilities.row(static_cast<int>(i));
    for (int c = 0; c < num_classes; ++c) {
      profile.mean_original[static_cast<std::size_t>(c)] += row1[c];
      profile.mean_khop[static_cast<std::size_t>(c)] += row2[c];
    }
  }
  if (profile.disagreed_count == 0) return std::nullopt;
  for (int c = 0; c < num_classes; ++c) {
    profile.mean_original[static_cast<std::size_t>(c)] /= profile.disagreed_count;
    profile.mean_khop[static_cast<std::size_t>(c)] /= profile.disagreed_count;
  }
  return profile;
}

/// Mean and population standard deviation of a run series.
struct AggregateStats {
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

inline AggregateStats aggregate_runs(const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("aggregate_runs: empty value list");
  }
  AggregateStats stats;
  stats.count = static_cast<int>(values.size());
  double total = 0.0;
  for (const double v : values) total += v;
  stats.mean = total / stats.count;
  double sq = 0.0;
  for (const double v : values) {
    const double d = v - stats.mean;
    sq += d * d;
  }
  stats.std = std::sqrt(sq / stats.count);
  return stats;
}

}  // namespace khopsim
