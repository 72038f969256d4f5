#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "khopsim/graph.hpp"
#include "khopsim/reachability.hpp"
#include "khopsim/rng.hpp"
#include "khopsim/shortest_paths.hpp"

using namespace khopsim;

namespace {

Graph triangle() { return from_edge_list(3, {{0, 1}, {1, 2}, {2, 0}}); }

Graph path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return from_edge_list(n, edges);
}

Graph complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  }
  return from_edge_list(n, edges);
}

Graph random_graph(int n, double density, RngEngine& rng) {
  Graph g(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform_unit(rng) < density) g.add_edge(i, j);
    }
  }
  return g;
}

Graph random_connected_graph(int n, double extra_density, RngEngine& rng) {
  Graph g(n);
  // random spanning tree, then extra edges
  for (int v = 1; v < n; ++v) {
    g.add_edge(v, static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(v))));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (uniform_unit(rng) < extra_density) g.add_edge(i, j);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("from_edge_list builds the triangle") {
  const Graph g = triangle();
  REQUIRE(g.num_nodes() == 3);
  REQUIRE(g.num_edges() == 3);
  REQUIRE(g.has_edge(0, 1));
  REQUIRE(g.has_edge(1, 0));
  REQUIRE_FALSE(g.has_edge(0, 0));
}

TEST_CASE("from_edge_list empty graph") {
  const Graph g = from_edge_list(2, {});
  REQUIRE(g.num_edges() == 0);
  REQUIRE_FALSE(g.has_edge(0, 1));
}

TEST_CASE("from_edge_list collapses duplicate pairs") {
  const Graph g = from_edge_list(3, {{0, 1}, {1, 0}});
  REQUIRE(g.num_edges() == 1);
  REQUIRE(g.has_edge(0, 1));
  REQUIRE_FALSE(g.has_edge(1, 2));
}

TEST_CASE("from_edge_list rejects bad input") {
  REQUIRE_THROWS_AS(from_edge_list(3, {{0, 3}}), std::invalid_argument);
  REQUIRE_THROWS_AS(from_edge_list(3, {{-1, 0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(from_edge_list(3, {{1, 1}}), std::invalid_argument);
  REQUIRE_THROWS_AS(Graph(0), std::invalid_argument);
}

TEST_CASE("graph adjacency stays symmetric with zero diagonal") {
  RngEngine rng = make_engine(7);
  const Graph g = random_graph(25, 0.3, rng);
  for (int i = 0; i < 25; ++i) {
    REQUIRE_FALSE(g.adj(i, i));
    for (int j = 0; j < 25; ++j) REQUIRE(g.adj(i, j) == g.adj(j, i));
  }
}

TEST_CASE("floyd_warshall on small fixtures") {
  const DistanceMatrix dt = floyd_warshall(triangle());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      REQUIRE(dt.at(i, j) == (i == j ? 0 : 1));
    }
  }
  const DistanceMatrix dp = floyd_warshall(path(4));
  REQUIRE(dp.at(0, 3) == 3);
  REQUIRE(dp.at(3, 0) == 3);
  REQUIRE(dp.at(1, 2) == 1);
}

TEST_CASE("bfs_all_pairs handles disconnection and simple shapes") {
  const DistanceMatrix d2 = bfs_all_pairs(from_edge_list(2, {}));
  REQUIRE(d2.at(0, 1) == DistanceMatrix::kUnreachable);
  REQUIRE_FALSE(d2.reachable(0, 1));
  REQUIRE(d2.at(0, 0) == 0);

  REQUIRE(bfs_all_pairs(triangle()) == floyd_warshall(triangle()));

  // star: center 0, leaves 1..4
  const Graph star = from_edge_list(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  const DistanceMatrix ds = bfs_all_pairs(star);
  REQUIRE(ds.at(1, 4) == 2);
  REQUIRE(ds.at(0, 3) == 1);
}

TEST_CASE("floyd_warshall agrees with the BFS oracle on random graphs") {
  RngEngine rng = make_engine(42);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(uniform_below(rng, 49));
    const double density = 0.05 + 0.55 * uniform_unit(rng);
    const Graph g = random_graph(n, density, rng);
    REQUIRE(floyd_warshall(g) == bfs_all_pairs(g));
  }
}

TEST_CASE("distance matrix metric invariants") {
  RngEngine rng = make_engine(11);
  const Graph g = random_graph(30, 0.15, rng);
  const DistanceMatrix d = floyd_warshall(g);
  for (int i = 0; i < 30; ++i) {
    REQUIRE(d.at(i, i) == 0);
    for (int j = 0; j < 30; ++j) {
      REQUIRE(d.at(i, j) == d.at(j, i));
      for (int m = 0; m < 30; ++m) {
        // triangle inequality with the sentinel absorbing
        const long long through = static_cast<long long>(d.at(i, m)) + d.at(m, j);
        REQUIRE(static_cast<long long>(d.at(i, j)) <= through);
      }
    }
  }
}

TEST_CASE("k_hop_reachability thresholds distances") {
  const Graph p3 = path(3);
  const ReachabilityMatrix r = k_hop_reachability(bfs_all_pairs(p3), 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) REQUIRE(r.at(i, j));
  }

  const ReachabilityMatrix r4 = k_hop_reachability(path(4), 2);
  REQUIRE_FALSE(r4.at(0, 3));
  REQUIRE(r4.at(0, 2));

  REQUIRE_THROWS_AS(k_hop_reachability(path(3), 0), std::invalid_argument);
}

TEST_CASE("k = n reachability equals component structure") {
  RngEngine rng = make_engine(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 30));
    const Graph g = random_graph(n, 0.12, rng);
    const ReachabilityMatrix r = k_hop_reachability(g, n);
    const ComponentPartition parts = connected_components(g);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        REQUIRE(r.at(i, j) == (parts.labels[i] == parts.labels[j]));
      }
    }
  }
}

TEST_CASE("reachability is monotone in k") {
  RngEngine rng = make_engine(23);
  const Graph g = random_graph(20, 0.15, rng);
  const DistanceMatrix d = bfs_all_pairs(g);
  for (int k = 1; k < 6; ++k) {
    const ReachabilityMatrix rk = k_hop_reachability(d, k);
    const ReachabilityMatrix rk1 = k_hop_reachability(d, k + 1);
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        if (rk.at(i, j)) REQUIRE(rk1.at(i, j));
      }
    }
  }
}

TEST_CASE("power_graph on paths") {
  REQUIRE(power_graph(path(3), 2) == triangle());

  const Graph p4sq = power_graph(path(4), 2);
  REQUIRE(p4sq.num_edges() == 5);
  REQUIRE(p4sq.has_edge(0, 2));
  REQUIRE(p4sq.has_edge(1, 3));
  REQUIRE_FALSE(p4sq.has_edge(0, 3));

  REQUIRE_THROWS_AS(power_graph(path(3), 0), std::invalid_argument);
}

TEST_CASE("power_graph(g, 1) is the identity transform") {
  RngEngine rng = make_engine(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = random_graph(15, 0.3, rng);
    REQUIRE(power_graph(g, 1) == g);
  }
}

TEST_CASE("power of a connected graph at its diameter is complete") {
  RngEngine rng = make_engine(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 20));
    const Graph g = random_connected_graph(n, 0.1, rng);
    const std::int32_t diam = diameter(g);
    REQUIRE(diam < DistanceMatrix::kUnreachable);
    const Graph p = power_graph(g, diam < 1 ? 1 : diam);
    REQUIRE(p == complete(n));
    REQUIRE(p == complete_components(g));
  }
}

TEST_CASE("power graph edges grow with k") {
  RngEngine rng = make_engine(37);
  const Graph g = random_graph(18, 0.12, rng);
  for (int k = 1; k < 5; ++k) {
    const Graph pk = power_graph(g, k);
    const Graph pk1 = power_graph(g, k + 1);
    for (int i = 0; i < 18; ++i) {
      for (int j = i + 1; j < 18; ++j) {
        if (pk.has_edge(i, j)) REQUIRE(pk1.has_edge(i, j));
      }
    }
  }
}

TEST_CASE("triangle and 3-path are 2-hop similar") {
  // path b-a-c: nodes a=0, b=1, c=2, edges {0,1} and {0,2}
  const Graph p = from_edge_list(3, {{1, 0}, {0, 2}});
  REQUIRE(is_k_hop_similar(triangle(), p, 2));
  REQUIRE(edge_difference(triangle(), p) == 1);
  // but not 1-hop similar
  REQUIRE_FALSE(is_k_hop_similar(triangle(), p, 1));
}

TEST_CASE("similarity is reflexive and rejects size mismatch") {
  RngEngine rng = make_engine(3);
  const Graph g = random_graph(12, 0.3, rng);
  for (int k = 1; k <= 4; ++k) REQUIRE(is_k_hop_similar(g, g, k));
  REQUIRE_THROWS_AS(is_k_hop_similar(g, Graph(5), 2), std::invalid_argument);
}

TEST_CASE("distinct reachability is detected") {
  const Graph p4 = path(4);
  Graph tri_plus = from_edge_list(4, {{0, 1}, {1, 2}, {2, 0}});
  REQUIRE_FALSE(is_k_hop_similar(p4, tri_plus, 2));
}

TEST_CASE("similarity matches power-graph equality and is transitive") {
  RngEngine rng = make_engine(17);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4 + static_cast<int>(uniform_below(rng, 12));
    const Graph a = random_graph(n, 0.35, rng);
    Graph b = a;
    Graph c = a;
    // perturb b and c by deleting random present edges if any
    const auto edges = a.edges();
    if (!edges.empty()) {
      const Edge eb = edges[uniform_below(rng, edges.size())];
      b.remove_edge(eb.first, eb.second);
      const Edge ec = edges[uniform_below(rng, edges.size())];
      c.remove_edge(ec.first, ec.second);
    }
    for (int k = 1; k <= 3; ++k) {
      const bool similar = is_k_hop_similar(a, b, k);
      REQUIRE(similar == (power_graph(a, k) == power_graph(b, k)));
      REQUIRE(is_k_hop_similar(b, a, k) == similar);  // symmetry
      if (similar && is_k_hop_similar(b, c, k)) {     // transitivity
        REQUIRE(is_k_hop_similar(a, c, k));
      }
    }
  }
}

TEST_CASE("connected_components on fixtures") {
  Graph tri_iso = from_edge_list(4, {{0, 1}, {1, 2}, {2, 0}});
  const ComponentPartition p = connected_components(tri_iso);
  REQUIRE(p.count == 2);
  REQUIRE(p.labels[0] == p.labels[1]);
  REQUIRE(p.labels[0] == p.labels[2]);
  REQUIRE(p.labels[3] != p.labels[0]);

  REQUIRE(connected_components(complete(6)).count == 1);
}

TEST_CASE("component count equals distinct reachable-set rows") {
  RngEngine rng = make_engine(29);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(uniform_below(rng, 25));
    const Graph g = random_graph(n, 0.1, rng);
    const DistanceMatrix d = bfs_all_pairs(g);
    std::set<std::vector<bool>> rows;
    for (int i = 0; i < n; ++i) {
      std::vector<bool> row(n);
      for (int j = 0; j < n; ++j) row[j] = d.reachable(i, j);
      rows.insert(row);
    }
    REQUIRE(connected_components(g).count == static_cast<int>(rows.size()));
  }
}

TEST_CASE("complete_components fixtures") {
  REQUIRE(complete_components(path(3)) == triangle());

  const Graph two_edges = from_edge_list(4, {{0, 1}, {2, 3}});
  REQUIRE(complete_components(two_edges) == two_edges);
}

TEST_CASE("diameter on fixtures") {
  REQUIRE(diameter(complete(4)) == 1);
  REQUIRE(diameter(path(5)) == 4);
  const Graph two_triangles =
      from_edge_list(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}});
  REQUIRE(diameter(two_triangles) == DistanceMatrix::kUnreachable);
  REQUIRE(diameter(from_edge_list(1, {})) == 0);
}

TEST_CASE("edge_difference basics") {
  const Graph t = triangle();
  REQUIRE(edge_difference(t, t) == 0);
  REQUIRE(edge_difference(complete(4), from_edge_list(4, {})) == 6);
  REQUIRE_THROWS_AS(edge_difference(t, complete(4)), std::invalid_argument);
}
