#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "khopsim/graph.hpp"

namespace khopsim {

/// All-pairs hop-count matrix. Unreachable pairs hold exactly kUnreachable,
/// a sentinel strictly greater than any node count; it absorbs addition in
/// the Floyd-Warshall relaxation without overflowing 32 bits.
class DistanceMatrix {
 public:
  static constexpr std::int32_t kUnreachable =
      std::numeric_limits<std::int32_t>::max() / 2;

  DistanceMatrix(int n, std::int32_t fill) : n_(n) {
    dist_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                 fill);
  }

  int num_nodes() const { return n_; }

  std::int32_t at(int i, int j) const { return dist_[index(i, j)]; }
  std::int32_t& at(int i, int j) { return dist_[index(i, j)]; }

  bool reachable(int i, int j) const { return at(i, j) < kUnreachable; }

  std::int32_t* row(int i) {
    return dist_.data() + static_cast<std::size_t>(i) * n_;
  }
  const std::int32_t* row(int i) const {
    return dist_.data() + static_cast<std::size_t>(i) * n_;
  }

  friend bool operator==(const DistanceMatrix&, const DistanceMatrix&) =
      default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<std::int32_t> dist_;
};

namespace detail {

inline DistanceMatrix seed_distances(const Graph& g) {
  const int n = g.num_nodes();
  DistanceMatrix d(n, DistanceMatrix::kUnreachable);
  for (int i = 0; i < n; ++i) {
    const std::uint8_t* row = g.row(i);
    std::int32_t* drow = d.row(i);
    for (int j = 0; j < n; ++j) {
      if (row[j] != 0) drow[j] = 1;
    }
    drow[i] = 0;
  }
  return d;
}

}  // namespace detail

/// Exact all-pairs shortest hop counts via Floyd-Warshall, O(n^3).
inline DistanceMatrix floyd_warshall(const Graph& g) {
  const int n = g.num_nodes();
  DistanceMatrix d = detail::seed_distances(g);
  for (int k = 0; k < n; ++k) {
    const std::int32_t* dk = d.row(k);
    for (int i = 0; i < n; ++i) {
      const std::int32_t dik = d.at(i, k);
      if (dik >= DistanceMatrix::kUnreachable) continue;
      std::int32_t* di = d.row(i);
      for (int j = 0; j < n; ++j) {
        const std::int32_t candidate = dik + dk[j];
        if (candidate < di[j]) di[j] = candidate;
      }
    }
  }
  return d;
}

/// Same contract as floyd_warshall, computed by breadth-first search from
/// every source. Kept as an independent oracle; outputs must match exactly.
inline DistanceMatrix bfs_all_pairs(const Graph& g) {
  const int n = g.num_nodes();
  DistanceMatrix d(n, DistanceMatrix::kUnreachable);
  std::vector<int> queue(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    std::int32_t* ds = d.row(s);
    ds[s] = 0;
    int head = 0;
    int tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const int v = queue[head++];
      const std::int32_t next = ds[v] + 1;
      const std::uint8_t* row = g.row(v);
      for (int u = 0; u < n; ++u) {
        if (row[u] != 0 && ds[u] == DistanceMatrix::kUnreachable) {
          ds[u] = next;
          queue[tail++] = u;
        }
      }
    }
  }
  return d;
}

/// Longest shortest path in g; DistanceMatrix::kUnreachable if disconnected.
inline std::int32_t diameter(const Graph& g) {
  const DistanceMatrix d = bfs_all_pairs(g);
  const int n = g.num_nodes();
  std::int32_t best = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::int32_t dij = d.at(i, j);
      if (dij == DistanceMatrix::kUnreachable) {
        return DistanceMatrix::kUnreachable;
      }
      if (dij > best) best = dij;
    }
  }
  return best;
}

}  // namespace khopsim
