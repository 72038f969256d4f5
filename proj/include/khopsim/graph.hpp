#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace khopsim {

/// Undirected edge, stored as an ordered pair (first < second).
using Edge = std::pair<int, int>;

/// Undirected simple graph backed by a dense symmetric 0/1 adjacency matrix.
/// Invariants enforced by the mutators: adj(i,j) == adj(j,i), adj(i,i) == 0.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n) : n_(n) {
    if (n <= 0) {
      throw std::invalid_argument("Graph: node count must be positive");
    }
    adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  }

  int num_nodes() const { return n_; }
  int num_edges() const { return m_; }

  bool has_edge(int i, int j) const {
    check_node(i);
    check_node(j);
    return adj_[index(i, j)] != 0;
  }

  /// Adds the undirected edge {i, j}. Idempotent; self-loops are rejected.
  void add_edge(int i, int j) {
    check_node(i);
    check_node(j);
    if (i == j) {
      throw std::invalid_argument("Graph: self-loop (" + std::to_string(i) +
                                  ", " + std::to_string(j) + ") not allowed");
    }
    if (adj_[index(i, j)] == 0) {
      adj_[index(i, j)] = 1;
      adj_[index(j, i)] = 1;
      ++m_;
    }
  }

  /// Removes the undirected edge {i, j} if present.
  void remove_edge(int i, int j) {
    check_node(i);
    check_node(j);
    if (i != j && adj_[index(i, j)] != 0) {
      adj_[index(i, j)] = 0;
      adj_[index(j, i)] = 0;
      --m_;
    }
  }

  /// Unchecked adjacency probe for hot loops.
  bool adj(int i, int j) const { return adj_[index(i, j)] != 0; }

  /// Raw row pointer (n entries, 0/1), for dense scans.
  const std::uint8_t* row(int i) const {
    return adj_.data() + static_cast<std::size_t>(i) * n_;
  }

  /// All edges as (i, j) pairs with i < j, in ascending lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> result;
    result.reserve(static_cast<std::size_t>(m_));
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        if (adj_[index(i, j)] != 0) result.emplace_back(i, j);
      }
    }
    return result;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  void check_node(int v) const {
    if (v < 0 || v >= n_) {
      throw std::invalid_argument("Graph: node " + std::to_string(v) +
                                  " out of range [0, " + std::to_string(n_) +
                                  ")");
    }
  }

  int n_ = 0;
  int m_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// Builds a graph from an undirected edge list. Duplicate pairs (in either
/// orientation) collapse to a single edge.
inline Graph from_edge_list(int n, const std::vector<Edge>& edges) {
  Graph g(n);
  for (const auto& [i, j] : edges) {
    g.add_edge(i, j);  // validates range and rejects self-loops
  }
  return g;
}

/// Number of unordered node pairs whose adjacency differs between g1 and g2.
/// For an edge-deletion subgraph this equals the number of deleted edges.
inline int edge_difference(const Graph& g1, const Graph& g2) {
  if (g1.num_nodes() != g2.num_nodes()) {
    throw std::invalid_argument("edge_difference: node counts differ");
  }
  const int n = g1.num_nodes();
  int diff = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* r1 = g1.row(i);
    const std::uint8_t* r2 = g2.row(i);
    for (int j = i + 1; j < n; ++j) {
      diff += (r1[j] != r2[j]) ? 1 : 0;
    }
  }
  return diff;
}

/// Partition of the nodes into connected components. Component ids are
/// contiguous, assigned in order of the smallest node in each component.
struct ComponentPartition {
  std::vector<int> labels;
  int count = 0;
};

inline ComponentPartition connected_components(const Graph& g) {
  const int n = g.num_nodes();
  ComponentPartition part;
  part.labels.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> stack;
  for (int start = 0; start < n; ++start) {
    if (part.labels[start] != -1) continue;
    const int id = part.count++;
    part.labels[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const std::uint8_t* row = g.row(v);
      for (int u = 0; u < n; ++u) {
        if (row[u] != 0 && part.labels[u] == -1) {
          part.labels[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  return part;
}

}  // namespace khopsim
