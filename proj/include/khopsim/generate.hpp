#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "khopsim/graph.hpp"
#include "khopsim/reachability.hpp"
#include "khopsim/rng.hpp"
#include "khopsim/shortest_paths.hpp"

namespace khopsim {

/// Configuration for batched k-hop-similar graph generation.
struct GenConfig {
  int k = 2;
  /// Fraction of the original edge count targeted for removal, in (0, 1].
  double threshold_fraction = 0.20;
  /// Edges per candidate batch; 0 means "derive as max(1, T / 2)".
  /// Note: large batches are all-or-nothing. On small or sparse graphs a
  /// batch of T/2 edges almost always breaks some two-hop pair with a single
  /// witness path and gets rejected wholesale, so desk-scale runs want an
  /// explicit batch size of ~4-16.
  int batch_size = 0;
  std::uint64_t seed = 0;
  /// Recompute candidate distances with Floyd-Warshall instead of the
  /// boolean-reachability fast path. Both paths compute exact [D <= k]
  /// matrices, so accept/reject decisions and outputs are identical.
  bool reference_mode = false;

  int removal_threshold(int edge_count) const {
    return static_cast<int>(threshold_fraction * edge_count);
  }

  int effective_batch_size(int edge_count) const {
    if (batch_size > 0) return batch_size;
    const int t = removal_threshold(edge_count);
    return t / 2 > 1 ? t / 2 : 1;
  }

  void validate() const {
    if (k < 1) throw std::invalid_argument("GenConfig: k must be >= 1");
    if (!(threshold_fraction > 0.0 && threshold_fraction <= 1.0)) {
      throw std::invalid_argument(
          "GenConfig: threshold_fraction must be in (0, 1]");
    }
    if (batch_size < 0) {
      throw std::invalid_argument("GenConfig: batch_size must be >= 1 or 0");
    }
  }
};

/// What a generation run did: which edges went, and how many batches it took.
struct GenReport {
  std::vector<Edge> removed_edges;
  int removal_count = 0;
  int batches_tried = 0;
  int batches_accepted = 0;
};

namespace detail {

inline std::vector<Edge> shuffled_edges(const Graph& g, std::uint64_t seed) {
  std::vector<Edge> edges = g.edges();
  RngEngine rng = make_engine(seed);
  shuffle_in_place(edges, rng);
  return edges;
}

/// Bitset form of [dist <= k], one row of n bits per node (self bit set).
/// Built by expanding closed neighborhoods k-1 times; expansion is monotone,
/// so it stops early once the rows saturate. Matches the Floyd-Warshall
/// route bit for bit: both are the exact k-bounded reachability relation.
struct BitReach {
  int n = 0;
  int words = 0;
  std::vector<std::uint64_t> bits;

  friend bool operator==(const BitReach&, const BitReach&) = default;
};

inline BitReach bit_reach(const Graph& g, int k) {
  BitReach r;
  r.n = g.num_nodes();
  r.words = (r.n + 63) / 64;
  const std::size_t total =
      static_cast<std::size_t>(r.n) * static_cast<std::size_t>(r.words);
  std::vector<std::uint64_t> base(total, 0);
  for (int u = 0; u < r.n; ++u) {
    std::uint64_t* row = base.data() + static_cast<std::size_t>(u) * r.words;
    const std::uint8_t* adj = g.row(u);
    for (int v = 0; v < r.n; ++v) {
      if (adj[v] != 0) row[v >> 6] |= 1ULL << (v & 63);
    }
    row[u >> 6] |= 1ULL << (u & 63);
  }

  r.bits = base;
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(r.words));
  for (int step = 1; step < k; ++step) {
    bool changed = false;
    for (int u = 0; u < r.n; ++u) {
      std::uint64_t* row = r.bits.data() + static_cast<std::size_t>(u) * r.words;
      for (int w = 0; w < r.words; ++w) acc[static_cast<std::size_t>(w)] = row[w];
      for (int w = 0; w < r.words; ++w) {
        std::uint64_t word = row[w];
        while (word != 0) {
          const int x = (w << 6) + __builtin_ctzll(word);
          word &= word - 1;
          const std::uint64_t* bx =
              base.data() + static_cast<std::size_t>(x) * r.words;
          for (int t = 0; t < r.words; ++t) acc[static_cast<std::size_t>(t)] |= bx[t];
        }
      }
      for (int w = 0; w < r.words; ++w) {
        if (acc[static_cast<std::size_t>(w)] != row[w]) {
          row[w] = acc[static_cast<std::size_t>(w)];
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return r;
}

/// Candidate check used by the generators. reference_mode routes through the
/// paper's Floyd-Warshall recomputation.
class ReachChecker {
 public:
  ReachChecker(const Graph& g, int k, bool reference_mode)
      : k_(k),
        target_(reference_mode
                    ? Target(k_hop_reachability(floyd_warshall(g), k))
                    : Target(bit_reach(g, k))) {}

  bool preserves(const Graph& candidate) const {
    if (const auto* reference = std::get_if<ReachabilityMatrix>(&target_)) {
      return k_hop_reachability(floyd_warshall(candidate), k_) == *reference;
    }
    return bit_reach(candidate, k_) == std::get<BitReach>(target_);
  }

 private:
  using Target = std::variant<BitReach, ReachabilityMatrix>;
  int k_;
  Target target_;
};

}  // namespace detail

/// Single-pass greedy edge removal. Visits every edge once (in seeded shuffle
/// order), deletes it if the k-hop reachability matrix is unchanged, and
/// keeps it otherwise. The result is always k-hop similar to the input.
inline std::pair<Graph, GenReport> generate_basic(const Graph& g, int k,
                                                  std::uint64_t seed,
                                                  bool reference_mode = false) {
  if (k < 1) throw std::invalid_argument("generate_basic: k must be >= 1");
  Graph current = g;
  GenReport report;
  const detail::ReachChecker checker(g, k, reference_mode);
  for (const Edge& e : detail::shuffled_edges(g, seed)) {
    Graph candidate = current;
    candidate.remove_edge(e.first, e.second);
    ++report.batches_tried;
    if (checker.preserves(candidate)) {
      current = std::move(candidate);
      report.removed_edges.push_back(e);
      ++report.removal_count;
      ++report.batches_accepted;
    }
  }
  return {std::move(current), std::move(report)};
}

/// Batched removal with a threshold on the total number of deleted edges.
/// Edges are shuffled once, sliced into consecutive batches of size b, and a
/// batch is kept only if deleting it wholesale leaves [D <= k] unchanged; a
/// failed batch is discarded entirely, with no per-edge retry. The loop stops
/// once removals reach T = floor(threshold_fraction * |E|) or all batches
/// have been tried, so the removal count never exceeds T + b - 1.
inline std::pair<Graph, GenReport> generate_batched(const Graph& g,
                                                    const GenConfig& cfg) {
  cfg.validate();
  Graph current = g;
  GenReport report;
  const int edge_count = g.num_edges();
  const int threshold = cfg.removal_threshold(edge_count);
  if (edge_count == 0 || threshold == 0) {
    return {std::move(current), std::move(report)};
  }

  const int batch = cfg.effective_batch_size(edge_count);
  const std::vector<Edge> edges = detail::shuffled_edges(g, cfg.seed);
  const detail::ReachChecker checker(g, cfg.k, cfg.reference_mode);

  for (int start = 0; start < edge_count && report.removal_count < threshold;
       start += batch) {
    const int end = start + batch < edge_count ? start + batch : edge_count;
    Graph candidate = current;
    for (int e = start; e < end; ++e) {
      candidate.remove_edge(edges[e].first, edges[e].second);
    }
    ++report.batches_tried;
    if (checker.preserves(candidate)) {
      current = std::move(candidate);
      report.removed_edges.insert(report.removed_edges.end(),
                                  edges.begin() + start, edges.begin() + end);
      report.removal_count += end - start;
      ++report.batches_accepted;
    }
  }
  return {std::move(current), std::move(report)};
}

/// Exhaustive test oracle for tiny graphs: enumerates every subset of E(g)
/// and returns the inclusion-maximal subsets whose wholesale deletion
/// preserves the k-hop reachability matrix. The empty set counts as
/// removable, so a graph whose every edge is critical yields exactly {{}}.
inline std::vector<std::vector<Edge>> brute_force_removal_oracle(
    const Graph& g, int k, int max_edges = 12) {
  if (k < 1) {
    throw std::invalid_argument("brute_force_removal_oracle: k must be >= 1");
  }
  const std::vector<Edge> edges = g.edges();
  const int m = static_cast<int>(edges.size());
  if (m > max_edges) {
    throw std::invalid_argument(
        "brute_force_removal_oracle: graph has more edges than max_edges");
  }
  const ReachabilityMatrix target = k_hop_reachability(floyd_warshall(g), k);

  std::vector<std::uint32_t> removable;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    Graph candidate = g;
    for (int e = 0; e < m; ++e) {
      if (mask & (1u << e)) candidate.remove_edge(edges[e].first, edges[e].second);
    }
    if (k_hop_reachability(floyd_warshall(candidate), k) == target) {
      removable.push_back(mask);
    }
  }

  std::vector<std::vector<Edge>> maximal;
  for (const std::uint32_t mask : removable) {
    bool dominated = false;
    for (const std::uint32_t other : removable) {
      if (other != mask && (other & mask) == mask) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    std::vector<Edge> set;
    for (int e = 0; e < m; ++e) {
      if (mask & (1u << e)) set.push_back(edges[e]);
    }
    maximal.push_back(std::move(set));
  }
  return maximal;
}

}  // namespace khopsim
