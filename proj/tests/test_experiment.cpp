#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "khopsim/experiment.hpp"

using namespace khopsim;

namespace {

Dataset small_dataset(int n, int classes, std::uint64_t seed, int dim = 8) {
  SbmConfig cfg;
  cfg.n = n;
  cfg.num_classes = classes;
  cfg.feature_dim = dim;
  cfg.seed = seed;
  return make_dataset(cfg);
}

TrainConfig quick_train(std::uint64_t seed) {
  TrainConfig cfg;
  cfg.max_epochs = 60;
  cfg.patience = 20;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("zero removal threshold forces zero disagreement") {
  const Dataset ds = small_dataset(60, 2, 1);
  GenConfig gen;
  gen.k = 2;
  gen.threshold_fraction = 1e-12;
  const PairOutcome outcome = run_pair(ds, gen, quick_train(2));
  REQUIRE(outcome.gen_report.removal_count == 0);
  REQUIRE(outcome.khop_graph == ds.graph);
  REQUIRE(disagreement(outcome.pair.original.predictions,
                       outcome.pair.khop.predictions) == 0.0);
}

TEST_CASE("run_pair output is k-hop similar and reproducible") {
  const Dataset ds = small_dataset(70, 2, 5);
  GenConfig gen;
  gen.k = 2;
  gen.batch_size = 4;
  gen.seed = 9;
  const PairOutcome a = run_pair(ds, gen, quick_train(3));
  const PairOutcome b = run_pair(ds, gen, quick_train(3));
  REQUIRE(is_k_hop_similar(ds.graph, a.khop_graph, 2));
  REQUIRE(a.khop_graph == b.khop_graph);
  REQUIRE(a.pair.original.predictions == b.pair.original.predictions);
  REQUIRE(a.pair.khop.predictions == b.pair.khop.predictions);
}

TEST_CASE("run_pair enforces depth == k") {
  const Dataset ds = small_dataset(30, 2, 7);
  GenConfig gen;
  gen.k = 3;
  TrainConfig tc = quick_train(1);
  tc.depth = 2;
  REQUIRE_THROWS_AS(run_pair(ds, gen, tc), std::invalid_argument);
}

TEST_CASE("sweep produces one row per axis value with stable schema") {
  SweepSpec spec;
  spec.base_sbm.n = 40;
  spec.base_sbm.feature_dim = 8;
  spec.base_train = quick_train(0);
  spec.base_gen.batch_size = 4;
  spec.axis = SweepAxis::Classes;
  spec.values = {4, 2, 3};  // unsorted on purpose
  spec.runs_per_point = 2;
  spec.threads = 2;
  const SweepOutcome outcome = run_sweep(spec);
  REQUIRE(outcome.rows.size() == 3);
  REQUIRE(outcome.rows[0].axis_value == 2.0);
  REQUIRE(outcome.rows[1].axis_value == 3.0);
  REQUIRE(outcome.rows[2].axis_value == 4.0);

  std::stringstream csv;
  write_sweep_csv(outcome.rows, csv);
  std::string header;
  std::getline(csv, header);
  REQUIRE(header ==
          "axis_value,acc_orig_mean,acc_orig_std,acc_khop_mean,acc_khop_std,"
          "disagree_mean,disagree_std,edges_removed_mean");
  int data_rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++data_rows;
  }
  REQUIRE(data_rows == 3);
}

TEST_CASE("single-run sweep points report zero standard deviation") {
  SweepSpec spec;
  spec.base_sbm.n = 36;
  spec.base_sbm.feature_dim = 6;
  spec.base_train = quick_train(4);
  spec.base_gen.batch_size = 4;
  spec.axis = SweepAxis::Nodes;
  spec.values = {36};
  spec.runs_per_point = 1;
  const SweepOutcome outcome = run_sweep(spec);
  REQUIRE(outcome.rows[0].acc_original.std == 0.0);
  REQUIRE(outcome.rows[0].disagreement.std == 0.0);
}

TEST_CASE("sweep is reproducible byte for byte and thread-count independent") {
  SweepSpec spec;
  spec.base_sbm.n = 40;
  spec.base_sbm.feature_dim = 8;
  spec.base_train = quick_train(12);
  spec.base_gen.batch_size = 4;
  spec.axis = SweepAxis::Inter;
  spec.values = {0.05, 0.2};
  spec.runs_per_point = 3;
  spec.base_seed = 7;

  spec.threads = 1;
  const SweepOutcome a = run_sweep(spec);
  spec.threads = 2;
  const SweepOutcome b = run_sweep(spec);

  std::stringstream csv_a, csv_b;
  write_sweep_csv(a.rows, csv_a);
  write_sweep_csv(b.rows, csv_b);
  REQUIRE(csv_a.str() == csv_b.str());

  for (std::size_t p = 0; p < a.runs.size(); ++p) {
    for (std::size_t r = 0; r < a.runs[p].size(); ++r) {
      REQUIRE(a.runs[p][r].seed == spec.base_seed + r);
      REQUIRE(a.runs[p][r].disagreement == b.runs[p][r].disagreement);
      REQUIRE(a.runs[p][r].removal_count == b.runs[p][r].removal_count);
    }
  }
}

TEST_CASE("sweep artifacts round trip and verify post hoc") {
  SweepSpec spec;
  spec.base_sbm.n = 40;
  spec.base_sbm.feature_dim = 8;
  spec.base_train = quick_train(2);
  spec.base_gen.batch_size = 4;
  spec.axis = SweepAxis::Nodes;
  spec.values = {40};
  spec.runs_per_point = 2;

  const std::string dir =
      (std::filesystem::temp_directory_path() / "khopsim_sweep_artifacts")
          .string();
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const SweepOutcome outcome = run_sweep(spec, dir);

  for (int run = 0; run < 2; ++run) {
    const std::string stem = dir + "/nodes_40.000000_run" + std::to_string(run);
    const Graph original = read_edge_list_file(stem + "_original.edges");
    const Graph khop = read_edge_list_file(stem + "_khop.edges");
    REQUIRE(is_k_hop_similar(original, khop, spec.base_gen.k));

    std::ifstream record_in(stem + "_record.json");
    REQUIRE(record_in.good());
    const nlohmann::json record = nlohmann::json::parse(record_in);
    REQUIRE(record["gen"]["removal_count"].get<int>() ==
            edge_difference(original, khop));
    REQUIRE(record["axis"] == "nodes");
  }
  std::filesystem::remove_all(dir);
  REQUIRE(outcome.rows.size() == 1);
}

TEST_CASE("probs csv lists one row per class") {
  SweepSpec spec;
  spec.base_sbm.n = 60;
  spec.base_sbm.num_classes = 6;
  spec.base_sbm.feature_dim = 4;
  spec.base_train = quick_train(3);
  spec.base_gen.batch_size = 4;
  spec.axis = SweepAxis::Classes;
  spec.values = {6};
  spec.runs_per_point = 3;
  const SweepOutcome outcome = run_sweep(spec);
  std::stringstream csv;
  write_probs_csv(outcome.runs[0], csv);
  std::string header;
  std::getline(csv, header);
  REQUIRE(header == "class,mean_prob_original,mean_prob_khop");
  // six classes at tiny scale disagree somewhere; expect six rows
  int rows = 0;
  std::string line;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  REQUIRE((rows == 0 || rows == 6));
}

TEST_CASE("oversmoothing demo on a union of complete components") {
  // two disjoint K_4s: already complete per component
  std::vector<Edge> edges;
  for (int base : {0, 4}) {
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) edges.emplace_back(base + i, base + j);
    }
  }
  Dataset ds;
  ds.graph = from_edge_list(8, edges);
  ds.labels = {0, 0, 0, 0, 1, 1, 1, 1};
  ds.features = generate_features(ds.labels, 6, 1.0, 4);
  ds.masks = split_dataset(ds.labels, {0.5, 0.25, 0.25}, 5);

  const OversmoothReport report = oversmoothing_demo(ds, 2, quick_train(6));
  REQUIRE(report.disagreement == 0.0);  // identical graphs, shared init
  REQUIRE(report.power_graph_complete);
  REQUIRE(report.component_variance.size() == 1);  // depth 2 -> one hidden layer
  REQUIRE(report.component_variance[0].size() == 2);
}

TEST_CASE("oversmoothing demo reports per-layer variances for deep nets") {
  SbmConfig cfg;
  cfg.n = 60;
  cfg.num_classes = 2;
  cfg.p_inter = 0.0;
  cfg.feature_dim = 8;
  cfg.seed = 11;
  const Dataset ds = make_dataset(cfg);
  TrainConfig tc = quick_train(8);
  tc.max_epochs = 30;
  tc.patience = 30;
  const OversmoothReport report = oversmoothing_demo(ds, 6, tc);
  REQUIRE(report.component_variance.size() == 5);
  REQUIRE(report.normalized_component_variance.size() == 5);
  REQUIRE(report.variance_ratio.size() ==
          report.component_variance[0].size());
  for (const auto& layer : report.component_variance) {
    for (const double v : layer) REQUIRE(v >= 0.0);
  }
  // directional spread within a component shrinks with depth
  for (const double ratio : report.normalized_variance_ratio) {
    REQUIRE(ratio < 1.0);
  }
  const nlohmann::json j = oversmooth_report_json(report);
  REQUIRE(j.contains("variance_ratio_last_over_first"));
  REQUIRE(j.contains("normalized_variance_ratio_last_over_first"));
  REQUIRE(j["depth"] == 6);
}
