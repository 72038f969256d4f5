#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>

#include "khopsim/gcn.hpp"
#include "khopsim/io.hpp"
#include "khopsim/rng.hpp"
#include "khopsim/sbm.hpp"

using namespace khopsim;

TEST_CASE("edge list round trip") {
  RngEngine rng = make_engine(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 1 + static_cast<int>(uniform_below(rng, 30));
    Graph g(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (uniform_unit(rng) < 0.3) g.add_edge(i, j);
      }
    }
    std::stringstream buffer;
    write_edge_list(g, buffer);
    REQUIRE(read_edge_list(buffer) == g);
  }
}

TEST_CASE("edge list accepts comments and blank lines") {
  std::istringstream in(
      "# a triangle\n"
      "3 3\n"
      "\n"
      "0 1\n"
      "# middle comment\n"
      "1 2\n"
      "2 0\n");
  const Graph g = read_edge_list(in);
  REQUIRE(g.num_nodes() == 3);
  REQUIRE(g.num_edges() == 3);
}

TEST_CASE("edge list rejects malformed input") {
  std::istringstream missing("3 2\n0 1\n");
  REQUIRE_THROWS_AS(read_edge_list(missing), std::runtime_error);

  std::istringstream bad_header("x y\n");
  REQUIRE_THROWS_AS(read_edge_list(bad_header), std::runtime_error);

  std::istringstream out_of_range("2 1\n0 5\n");
  REQUIRE_THROWS_AS(read_edge_list(out_of_range), std::invalid_argument);

  std::istringstream self_loop("2 1\n1 1\n");
  REQUIRE_THROWS_AS(read_edge_list(self_loop), std::invalid_argument);

  std::istringstream empty("");
  REQUIRE_THROWS_AS(read_edge_list(empty), std::runtime_error);
}

TEST_CASE("feature csv round trips exactly") {
  RngEngine rng = make_engine(3);
  DenseMatrix m(7, 5);
  GaussianSampler gauss(rng);
  for (double& x : m.data()) x = gauss() * 1e3;
  std::stringstream buffer;
  write_features_csv(m, buffer);
  REQUIRE(read_features_csv(buffer) == m);
}

TEST_CASE("labels csv round trips and validates") {
  const std::vector<int> labels = {0, 1, 2, 1};
  Masks masks;
  masks.train = {1, 0, 0, 1};
  masks.val = {0, 1, 0, 0};
  masks.test = {0, 0, 1, 0};
  std::stringstream buffer;
  write_labels_csv(labels, masks, buffer);
  const LabelsAndMasks back = read_labels_csv(buffer);
  REQUIRE(back.labels == labels);
  REQUIRE(back.masks.train == masks.train);
  REQUIRE(back.masks.val == masks.val);
  REQUIRE(back.masks.test == masks.test);

  std::istringstream bad("node,label,split\n0,1,weird\n");
  REQUIRE_THROWS_AS(read_labels_csv(bad), std::runtime_error);
  std::istringstream no_header("0,1,train\n");
  REQUIRE_THROWS_AS(read_labels_csv(no_header), std::runtime_error);
}

TEST_CASE("dataset bundle round trips through files") {
  SbmConfig cfg;
  cfg.n = 40;
  cfg.num_classes = 2;
  cfg.feature_dim = 6;
  cfg.seed = 44;
  const Dataset ds = make_dataset(cfg);

  const std::string prefix =
      (std::filesystem::temp_directory_path() / "khopsim_io_test").string();
  save_dataset(ds, prefix);
  const Dataset back = load_dataset_prefix(prefix);
  REQUIRE(back.graph == ds.graph);
  REQUIRE(back.features == ds.features);
  REQUIRE(back.labels == ds.labels);
  REQUIRE(back.masks.train == ds.masks.train);
  REQUIRE(back.masks.val == ds.masks.val);
  REQUIRE(back.masks.test == ds.masks.test);

  std::filesystem::remove(prefix + ".edges");
  std::filesystem::remove(prefix + ".features.csv");
  std::filesystem::remove(prefix + ".labels.csv");
}

TEST_CASE("checkpoint round trips exactly") {
  const GcnParams params = init_params(5, 7, 3, 2, 99);
  std::stringstream buffer;
  save_checkpoint(params, 99, buffer);
  const Checkpoint back = load_checkpoint(buffer);
  REQUIRE(back.seed == 99);
  REQUIRE(back.params.depth() == 2);
  REQUIRE(back.params.layers[0] == params.layers[0]);
  REQUIRE(back.params.layers[1] == params.layers[1]);

  std::istringstream truncated(
      "{\"dims\":[2,2],\"depth\":1,\"seed\":0}\n1.0,2.0\n");
  REQUIRE_THROWS_AS(load_checkpoint(truncated), std::runtime_error);
}

TEST_CASE("generation report serializes every field") {
  GenReport report;
  report.removed_edges = {{0, 2}, {1, 3}};
  report.removal_count = 2;
  report.batches_tried = 4;
  report.batches_accepted = 2;
  const nlohmann::json j = gen_report_json(report);
  REQUIRE(j["removal_count"] == 2);
  REQUIRE(j["batches_tried"] == 4);
  REQUIRE(j["batches_accepted"] == 2);
  REQUIRE(j["removed"].size() == 2);
  REQUIRE(j["removed"][0][0] == 0);
  REQUIRE(j["removed"][0][1] == 2);
}
