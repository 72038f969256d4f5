#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "khopsim/gcn.hpp"
#include "khopsim/generate.hpp"
#include "khopsim/io.hpp"
#include "khopsim/metrics.hpp"
#include "khopsim/sbm.hpp"

namespace khopsim {

/// Trains one model on the dataset's graph and one on a replacement graph,
/// with identical features, labels and masks. With shared_init both models
/// start from the same seeded initialization, isolating topology as the only
/// varying factor; otherwise the second model draws an independent init.
inline RunPair train_pair_on(const Dataset& dataset, const Graph& khop_graph,
                             const TrainConfig& cfg, bool shared_init = true) {
  if (khop_graph.num_nodes() != dataset.graph.num_nodes()) {
    throw std::invalid_argument("train_pair_on: node counts differ");
  }
  RunPair pair;
  pair.original = train(dataset, cfg);
  Dataset khop_ds;
  khop_ds.graph = khop_graph;
  khop_ds.features = dataset.features;
  khop_ds.labels = dataset.labels;
  khop_ds.masks = dataset.masks;
  TrainConfig khop_cfg = cfg;
  if (!shared_init) khop_cfg.seed = mix_seed(cfg.seed, 0x5eedu);
  pair.khop = train(khop_ds, khop_cfg);
  return pair;
}

struct PairOutcome {
  RunPair pair;
  GenReport gen_report;
  Graph khop_graph;
};

/// One conjecture-validation run: generate the k-hop-similar graph, train
/// both models, return everything. Requires train depth == generation k
/// (a k-layer GCN sees exactly k hops).
inline PairOutcome run_pair(const Dataset& dataset, const GenConfig& gen_cfg,
                            const TrainConfig& train_cfg,
                            bool shared_init = true) {
  gen_cfg.validate();
  train_cfg.validate();
  if (train_cfg.depth != gen_cfg.k) {
    throw std::invalid_argument(
        "run_pair: train depth must equal generation hop bound k");
  }
  PairOutcome outcome;
  auto [khop_graph, report] = generate_batched(dataset.graph, gen_cfg);
  outcome.khop_graph = std::move(khop_graph);
  outcome.gen_report = std::move(report);
  outcome.pair =
      train_pair_on(dataset, outcome.khop_graph, train_cfg, shared_init);
  return outcome;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

enum class SweepAxis { Nodes, Intra, Inter, Classes, Depth };

inline const char* axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::Nodes: return "nodes";
    case SweepAxis::Intra: return "intra";
    case SweepAxis::Inter: return "inter";
    case SweepAxis::Classes: return "classes";
    case SweepAxis::Depth: return "depth";
  }
  return "?";
}

inline SweepAxis parse_axis(const std::string& name) {
  if (name == "nodes") return SweepAxis::Nodes;
  if (name == "intra") return SweepAxis::Intra;
  if (name == "inter") return SweepAxis::Inter;
  if (name == "classes") return SweepAxis::Classes;
  if (name == "depth") return SweepAxis::Depth;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

/// One-axis parameter sweep around fixed base configs. Run j of every point
/// uses seed base_seed + j; dataset, generation and initialization seeds are
/// derived from it through fixed substreams.
struct SweepSpec {
  SbmConfig base_sbm;
  SplitFractions fractions;
  GenConfig base_gen;
  TrainConfig base_train;
  SweepAxis axis = SweepAxis::Nodes;
  std::vector<double> values;
  int runs_per_point = 10;
  std::uint64_t base_seed = 0;
  bool shared_init = true;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const {
    if (values.empty()) throw std::invalid_argument("SweepSpec: no axis values");
    if (runs_per_point < 1) {
      throw std::invalid_argument("SweepSpec: runs_per_point must be >= 1");
    }
  }
};

struct PointRun {
  std::uint64_t seed = 0;
  double acc_original = 0.0;
  double acc_khop = 0.0;
  double disagreement = 0.0;
  int removal_count = 0;
  int batches_tried = 0;
  int batches_accepted = 0;
  std::optional<DisagreedProbProfile> probs;
};

struct SweepRow {
  double axis_value = 0.0;
  AggregateStats acc_original;
  AggregateStats acc_khop;
  AggregateStats disagreement;
  double edges_removed_mean = 0.0;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::vector<std::vector<PointRun>> runs;  // [point][run]
};

namespace detail {

struct SweepPointConfig {
  SbmConfig sbm;
  GenConfig gen;
  TrainConfig train;
};

inline SweepPointConfig apply_axis(const SweepSpec& spec, double value) {
  SweepPointConfig point{spec.base_sbm, spec.base_gen, spec.base_train};
  switch (spec.axis) {
    case SweepAxis::Nodes:
      point.sbm.n = static_cast<int>(value);
      break;
    case SweepAxis::Intra:
      point.sbm.p_intra = value;
      break;
    case SweepAxis::Inter:
      point.sbm.p_inter = value;
      break;
    case SweepAxis::Classes:
      point.sbm.num_classes = static_cast<int>(value);
      break;
    case SweepAxis::Depth:
      // The conjecture pairs a k-layer GCN with k-hop similarity, so the
      // depth axis moves the generation hop bound along with it.
      point.train.depth = static_cast<int>(value);
      point.gen.k = static_cast<int>(value);
      break;
  }
  return point;
}

}  // namespace detail

/// Executes one sweep run and, if artifacts_dir is nonempty, writes that
/// run's serialized graphs and JSON record there.
inline PointRun execute_sweep_run(const SweepSpec& spec, double axis_value,
                                  int run_index,
                                  const std::string& artifacts_dir = "") {
  detail::SweepPointConfig point = detail::apply_axis(spec, axis_value);
  const std::uint64_t run_seed = spec.base_seed + static_cast<std::uint64_t>(run_index);
  point.sbm.seed = mix_seed(run_seed, 101);
  point.gen.seed = mix_seed(run_seed, 202);
  point.train.seed = mix_seed(run_seed, 303);

  const Dataset dataset = make_dataset(point.sbm, spec.fractions);
  const PairOutcome outcome =
      run_pair(dataset, point.gen, point.train, spec.shared_init);

  PointRun run;
  run.seed = run_seed;
  run.acc_original = outcome.pair.original.test_accuracy;
  run.acc_khop = outcome.pair.khop.test_accuracy;
  run.disagreement = disagreement(outcome.pair.original.predictions,
                                  outcome.pair.khop.predictions);
  run.removal_count = outcome.gen_report.removal_count;
  run.batches_tried = outcome.gen_report.batches_tried;
  run.batches_accepted = outcome.gen_report.batches_accepted;
  run.probs = mean_probs_on_disagreed(outcome.pair);

  if (!artifacts_dir.empty()) {
    const std::string stem = artifacts_dir + "/" + axis_name(spec.axis) + "_" +
                             format_metric(axis_value) + "_run" +
                             std::to_string(run_index);
    write_edge_list_file(dataset.graph, stem + "_original.edges");
    write_edge_list_file(outcome.khop_graph, stem + "_khop.edges");

    nlohmann::json record;
    record["axis"] = axis_name(spec.axis);
    record["axis_value"] = axis_value;
    record["run"] = run_index;
    record["seed"] = run.seed;
    record["acc_original"] = run.acc_original;
    record["acc_khop"] = run.acc_khop;
    record["disagreement"] = run.disagreement;
    record["gen"] = gen_report_json(outcome.gen_report);
    if (run.probs) {
      record["disagreed"] = {{"count", run.probs->disagreed_count},
                             {"mean_probs_original", run.probs->mean_original},
                             {"mean_probs_khop", run.probs->mean_khop}};
    }
    std::ofstream out(stem + "_record.json");
    if (!out) throw std::runtime_error("cannot write run record: " + stem);
    out << record.dump(2) << '\n';
  }
  return run;
}

/// Runs the sweep on a small worker pool. Every (point, run) task is an
/// independent pure computation, so scheduling cannot change the results.
inline SweepOutcome run_sweep(const SweepSpec& spec,
                              const std::string& artifacts_dir = "") {
  spec.validate();
  std::vector<double> values = spec.values;
  std::sort(values.begin(), values.end());

  const int num_points = static_cast<int>(values.size());
  const int runs = spec.runs_per_point;
  SweepOutcome outcome;
  outcome.runs.assign(static_cast<std::size_t>(num_points),
                      std::vector<PointRun>(static_cast<std::size_t>(runs)));

  const int total_tasks = num_points * runs;
  int worker_count = spec.threads > 0
                         ? spec.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;
  if (worker_count > total_tasks) worker_count = total_tasks;

  std::atomic<int> next_task{0};
  std::vector<std::string> errors(static_cast<std::size_t>(worker_count));
  const auto worker = [&](int worker_index) {
    try {
      for (int task = next_task.fetch_add(1); task < total_tasks;
           task = next_task.fetch_add(1)) {
        const int point = task / runs;
        const int run = task % runs;
        outcome.runs[static_cast<std::size_t>(point)][static_cast<std::size_t>(run)] =
            execute_sweep_run(spec, values[static_cast<std::size_t>(point)], run,
                              artifacts_dir);
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(worker_index)] = e.what();
    }
  };

  if (worker_count == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
  }
  for (const std::string& err : errors) {
    if (!err.empty()) throw std::runtime_error("sweep run failed: " + err);
  }

  for (int p = 0; p < num_points; ++p) {
    const std::vector<PointRun>& point_runs =
        outcome.runs[static_cast<std::size_t>(p)];
    std::vector<double> acc1, acc2, dis, removed;
    for (const PointRun& r : point_runs) {
      acc1.push_back(r.acc_original);
      acc2.push_back(r.acc_khop);
      dis.push_back(r.disagreement);
      removed.push_back(static_cast<double>(r.removal_count));
    }
    SweepRow row;
    row.axis_value = values[static_cast<std::size_t>(p)];
    row.acc_original = aggregate_runs(acc1);
    row.acc_khop = aggregate_runs(acc2);
    row.disagreement = aggregate_runs(dis);
    row.edges_removed_mean = aggregate_runs(removed).mean;
    outcome.rows.push_back(row);
  }
  return outcome;
}

// ---------------------------------------------------------------------------
// result serialization
// ---------------------------------------------------------------------------

inline void write_sweep_csv(const std::vector<SweepRow>& rows,
                            std::ostream& out) {
  out << "axis_value,acc_orig_mean,acc_orig_std,acc_khop_mean,acc_khop_std,"
         "disagree_mean,disagree_std,edges_removed_mean\n";
  for (const SweepRow& row : rows) {
    out << format_metric(row.axis_value) << ',' << format_metric(row.acc_original.mean)
        << ',' << format_metric(row.acc_original.std) << ','
        << format_metric(row.acc_khop.mean) << ',' << format_metric(row.acc_khop.std)
        << ',' << format_metric(row.disagreement.mean) << ','
        << format_metric(row.disagreement.std) << ','
        << format_metric(row.edges_removed_mean) << '\n';
  }
}

inline void write_sweep_csv_file(const std::vector<SweepRow>& rows,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write sweep csv: " + path);
  write_sweep_csv(rows, out);
}

/// Plot-ready per-class mean probabilities over disagreed nodes, averaged
/// across the runs that had any disagreement.
inline void write_probs_csv(const std::vector<PointRun>& runs,
                            std::ostream& out) {
  int num_classes = 0;
  for (const PointRun& r : runs) {
    if (r.probs) {
      num_classes = static_cast<int>(r.probs->mean_original.size());
      break;
    }
  }
  out << "class,mean_prob_original,mean_prob_khop\n";
  if (num_classes == 0) return;
  std::vector<double> orig(static_cast<std::size_t>(num_classes), 0.0);
  std::vector<double> khop(static_cast<std::size_t>(num_classes), 0.0);
  int counted = 0;
  for (const PointRun& r : runs) {
    if (!r.probs) continue;
    ++counted;
    for (int c = 0; c < num_classes; ++c) {
      orig[static_cast<std::size_t>(c)] += r.probs->mean_original[static_cast<std::size_t>(c)];
      khop[static_cast<std::size_t>(c)] += r.probs->mean_khop[static_cast<std::size_t>(c)];
    }
  }
  for (int c = 0; c < num_classes; ++c) {
    out << c << ',' << format_metric(orig[static_cast<std::size_t>(c)] / counted)
        << ',' << format_metric(khop[static_cast<std::size_t>(c)] / counted) << '\n';
  }
}

// ---------------------------------------------------------------------------
// oversmoothing demo
// ---------------------------------------------------------------------------

/// Empirical oversmoothing probe. Findings are report-only: the underlying
/// depth-equivalence statements are conjectural approximations, so nothing
/// here asserts a threshold.
///
/// Two spread measures per hidden layer and component:
///  - raw: mean squared deviation per coordinate of the embeddings. Trained
///    weight matrices are free to grow in scale, so this can increase with
///    depth even while the embeddings align.
///  - normalized: the same after projecting each embedding to the unit
///    sphere. This isolates the directional collapse that repeated
///    neighborhood averaging produces.
struct OversmoothReport {
  int depth = 0;
  double disagreement = 0.0;
  double acc_original = 0.0;
  double acc_complete = 0.0;
  /// [hidden layer l-1][component]: raw embedding variance at layer l.
  std::vector<std::vector<double>> component_variance;
  /// Same layout, row-normalized embeddings.
  std::vector<std::vector<double>> normalized_component_variance;
  /// Per component: last hidden layer's variance over the first's.
  std::vector<double> variance_ratio;
  std::vector<double> normalized_variance_ratio;
  bool power_graph_complete = false;
};

namespace detail {

inline std::vector<double> per_component_variance(
    const DenseMatrix& h, const ComponentPartition& parts) {
  std::vector<double> variance(static_cast<std::size_t>(parts.count), 0.0);
  for (int c = 0; c < parts.count; ++c) {
    std::vector<double> mean(static_cast<std::size_t>(h.cols()), 0.0);
    int members = 0;
    for (int i = 0; i < h.rows(); ++i) {
      if (parts.labels[static_cast<std::size_t>(i)] != c) continue;
      ++members;
      const double* row = h.row(i);
      for (int j = 0; j < h.cols(); ++j) mean[static_cast<std::size_t>(j)] += row[j];
    }
    for (double& m : mean) m /= members;
    double sq = 0.0;
    for (int i = 0; i < h.rows(); ++i) {
      if (parts.labels[static_cast<std::size_t>(i)] != c) continue;
      const double* row = h.row(i);
      for (int j = 0; j < h.cols(); ++j) {
        const double d = row[j] - mean[static_cast<std::size_t>(j)];
        sq += d * d;
      }
    }
    variance[static_cast<std::size_t>(c)] =
        sq / (static_cast<double>(members) * h.cols());
  }
  return variance;
}

inline DenseMatrix row_normalized(const DenseMatrix& h) {
  DenseMatrix u = h;
  for (int i = 0; i < u.rows(); ++i) {
    double* row = u.row(i);
    double norm = 0.0;
    for (int j = 0; j < u.cols(); ++j) norm += row[j] * row[j];
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (int j = 0; j < u.cols(); ++j) row[j] /= norm;
    }
  }
  return u;
}

inline std::vector<double> last_over_first(
    const std::vector<std::vector<double>>& per_layer) {
  std::vector<double> ratios;
  if (per_layer.empty()) return ratios;
  const std::vector<double>& first = per_layer.front();
  const std::vector<double>& last = per_layer.back();
  for (std::size_t c = 0; c < first.size(); ++c) {
    ratios.push_back(first[c] > 0.0 ? last[c] / first[c] : 0.0);
  }
  return ratios;
}

}  // namespace detail

inline OversmoothReport oversmoothing_demo(const Dataset& dataset, int depth,
                                           TrainConfig train_cfg) {
  if (depth < 1) {
    throw std::invalid_argument("oversmoothing_demo: depth must be >= 1");
  }
  train_cfg.depth = depth;
  train_cfg.validate();

  const Graph complete = complete_components(dataset.graph);
  const RunPair pair = train_pair_on(dataset, complete, train_cfg, true);

  OversmoothReport report;
  report.depth = depth;
  report.disagreement =
      disagreement(pair.original.predictions, pair.khop.predictions);
  report.acc_original = pair.original.test_accuracy;
  report.acc_complete = pair.khop.test_accuracy;
  report.power_graph_complete = power_graph(dataset.graph, depth) == complete;

  const ComponentPartition parts = connected_components(dataset.graph);
  const DenseMatrix a_hat = normalize_adjacency(dataset.graph);
  const ForwardTrace trace =
      gcn_forward(pair.original.params, a_hat, dataset.features);

  // activations[0] is the input; hidden layers start at index 1.
  for (std::size_t l = 1; l < trace.activations.size(); ++l) {
    const DenseMatrix& h = trace.activations[l];
    report.component_variance.push_back(detail::per_component_variance(h, parts));
    report.normalized_component_variance.push_back(
        detail::per_component_variance(detail::row_normalized(h), parts));
  }
  report.variance_ratio = detail::last_over_first(report.component_variance);
  report.normalized_variance_ratio =
      detail::last_over_first(report.normalized_component_variance);
  return report;
}

inline nlohmann::json oversmooth_report_json(const OversmoothReport& report) {
  nlohmann::json j;
  j["depth"] = report.depth;
  j["disagreement"] = report.disagreement;
  j["acc_original"] = report.acc_original;
  j["acc_complete_components"] = report.acc_complete;
  j["component_variance_by_hidden_layer"] = report.component_variance;
  j["normalized_component_variance_by_hidden_layer"] =
      report.normalized_component_variance;
  j["variance_ratio_last_over_first"] = report.variance_ratio;
  j["normalized_variance_ratio_last_over_first"] =
      report.normalized_variance_ratio;
  j["power_graph_complete_per_component"] = report.power_graph_complete;
  return j;
}

}  // namespace khopsim
