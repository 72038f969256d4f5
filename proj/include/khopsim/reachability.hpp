#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "khopsim/graph.hpp"
#include "khopsim/shortest_paths.hpp"

namespace khopsim {

/// Boolean k-hop reachability: reach(i,j) iff dist(i,j) <= k. The diagonal is
/// always true (distance 0), so the matrix never distinguishes graphs by
/// whether a node "reaches itself".
class ReachabilityMatrix {
 public:
  ReachabilityMatrix(int n, int k) : n_(n), k_(k) {
    reach_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                  0);
  }

  int num_nodes() const { return n_; }
  int hop_bound() const { return k_; }

  bool at(int i, int j) const { return reach_[index(i, j)] != 0; }
  void set(int i, int j, bool value) {
    reach_[index(i, j)] = value ? 1 : 0;
  }

  friend bool operator==(const ReachabilityMatrix&,
                         const ReachabilityMatrix&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_;
  int k_;
  std::vector<std::uint8_t> reach_;
};

inline ReachabilityMatrix k_hop_reachability(const DistanceMatrix& d, int k) {
  if (k < 1) {
    throw std::invalid_argument("k_hop_reachability: k must be >= 1");
  }
  const int n = d.num_nodes();
  ReachabilityMatrix r(n, k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      r.set(i, j, d.at(i, j) <= k);
    }
  }
  return r;
}

inline ReachabilityMatrix k_hop_reachability(const Graph& g, int k) {
  if (k < 1) {
    throw std::invalid_argument("k_hop_reachability: k must be >= 1");
  }
  return k_hop_reachability(bfs_all_pairs(g), k);
}

/// k-th power of g: edge (i,j) present iff 1 <= dist_g(i,j) <= k.
/// power_graph(g, 1) == g.
inline Graph power_graph(const Graph& g, int k) {
  if (k < 1) {
    throw std::invalid_argument("power_graph: k must be >= 1");
  }
  const DistanceMatrix d = bfs_all_pairs(g);
  const int n = g.num_nodes();
  Graph p(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (d.at(i, j) <= k) p.add_edge(i, j);
    }
  }
  return p;
}

/// True iff the binary k-hop reachability matrices of g1 and g2 coincide.
/// Node identity is positional: index i in g1 corresponds to index i in g2.
inline bool is_k_hop_similar(const Graph& g1, const Graph& g2, int k) {
  if (g1.num_nodes() != g2.num_nodes()) {
    throw std::invalid_argument("is_k_hop_similar: node counts differ");
  }
  return k_hop_reachability(g1, k) == k_hop_reachability(g2, k);
}

/// Replaces every connected component of g by the complete graph on its
/// vertex set; no cross-component edges.
inline Graph complete_components(const Graph& g) {
  const ComponentPartition part = connected_components(g);
  const int n = g.num_nodes();
  Graph result(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (part.labels[i] == part.labels[j]) result.add_edge(i, j);
    }
  }
  return result;
}

}  // namespace khopsim
