// khopsim command-line tool: SBM dataset generation, k-hop-similar graph
// generation, paired GCN training, parameter sweeps and the oversmoothing
// probe. Every subcommand accepts --seed and an optional --config JSON file
// mirroring its flags.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "khopsim/khopsim.hpp"

namespace {

using namespace khopsim;

/// JSON flavor of CLI11's config file support: a flat object per
/// (sub)command, e.g. {"n": 300, "p-intra": 0.5}.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    nlohmann::json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const std::string& name = opt->get_lnames()[0];
      if (opt->get_type_size() != 0) {
        if (opt->count() == 1) {
          j[name] = opt->results().at(0);
        } else if (opt->count() > 1) {
          j[name] = opt->results();
        } else if (default_also && !opt->get_default_str().empty()) {
          j[name] = opt->get_default_str();
        }
      } else if (opt->count() > 0) {
        j[name] = true;
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    input >> j;
    return flatten(j, "", {});
  }

 private:
  static std::vector<CLI::ConfigItem> flatten(const nlohmann::json& j,
                                              const std::string& name,
                                              std::vector<std::string> parents) {
    std::vector<CLI::ConfigItem> results;
    if (j.is_object()) {
      for (auto it = j.cbegin(); it != j.cend(); ++it) {
        std::vector<std::string> sub_parents = parents;
        if (!name.empty()) sub_parents.push_back(name);
        auto sub = flatten(*it, it.key(), std::move(sub_parents));
        results.insert(results.end(), sub.begin(), sub.end());
      }
      return results;
    }
    if (name.empty()) throw CLI::ConversionError("unnamed JSON config value");
    results.emplace_back();
    CLI::ConfigItem& item = results.back();
    item.name = name;
    item.parents = std::move(parents);
    if (j.is_array()) {
      for (const auto& element : j) {
        item.inputs.push_back(element.is_string() ? element.get<std::string>()
                                                  : element.dump());
      }
    } else if (j.is_string()) {
      item.inputs = {j.get<std::string>()};
    } else {
      item.inputs = {j.dump()};
    }
    return results;
  }
};

struct DatasetArgs {
  std::string graph_path;
  std::string features_path;
  std::string labels_path;

  Dataset load() const {
    return load_dataset(graph_path, features_path, labels_path);
  }
};

void add_dataset_options(CLI::App* sub, DatasetArgs& args) {
  sub->add_option("--graph", args.graph_path, "edge-list file")->required();
  sub->add_option("--features", args.features_path, "features CSV (one row per node)")
      ->required();
  sub->add_option("--labels", args.labels_path, "labels CSV (node,label,split)")
      ->required();
}

void add_gen_options(CLI::App* sub, GenConfig& gen) {
  sub->add_option("--k", gen.k, "hop bound")->capture_default_str();
  sub->add_option("--threshold-frac", gen.threshold_fraction,
                  "fraction of edges targeted for removal")
      ->capture_default_str();
  sub->add_option("--batch-size", gen.batch_size,
                  "edges per candidate batch (0 = half the removal target)")
      ->capture_default_str();
}

void add_train_options(CLI::App* sub, TrainConfig& cfg, bool with_depth = true) {
  if (with_depth) {
    sub->add_option("--depth", cfg.depth, "GCN layer count")->capture_default_str();
  }
  sub->add_option("--hidden", cfg.hidden_units, "hidden units per layer")
      ->capture_default_str();
  sub->add_option("--lr", cfg.learning_rate, "Adam learning rate")
      ->capture_default_str();
  sub->add_option("--epochs", cfg.max_epochs, "maximum training epochs")
      ->capture_default_str();
  sub->add_option("--patience", cfg.patience, "early-stopping patience (epochs)")
      ->capture_default_str();
}

/// When --epochs is lowered below the default patience without an explicit
/// --patience, shrink the patience to fit instead of rejecting the run.
void clamp_default_patience(const CLI::App* sub, TrainConfig& cfg) {
  if (sub->count("--patience") == 0 && cfg.max_epochs > 0 &&
      cfg.patience > cfg.max_epochs) {
    cfg.patience = cfg.max_epochs;
  }
}

void add_sbm_options(CLI::App* sub, SbmConfig& cfg, SplitFractions& fractions) {
  sub->add_option("--n", cfg.n, "node count")->capture_default_str();
  sub->add_option("--classes", cfg.num_classes, "number of classes")
      ->capture_default_str();
  sub->add_option("--p-intra", cfg.p_intra, "within-block edge probability")
      ->capture_default_str();
  sub->add_option("--p-inter", cfg.p_inter, "between-block edge probability")
      ->capture_default_str();
  sub->add_option("--dim", cfg.feature_dim, "feature dimension")
      ->capture_default_str();
  sub->add_option("--variance", cfg.feature_variance, "feature variance")
      ->capture_default_str();
  sub->add_option("--train-frac", fractions.train, "training fraction")
      ->capture_default_str();
  sub->add_option("--val-frac", fractions.val, "validation fraction")
      ->capture_default_str();
  sub->add_option("--test-frac", fractions.test, "test fraction")
      ->capture_default_str();
}

nlohmann::json pair_record_json(const PairOutcome& outcome) {
  nlohmann::json record;
  record["acc_original"] = outcome.pair.original.test_accuracy;
  record["acc_khop"] = outcome.pair.khop.test_accuracy;
  record["disagreement"] = disagreement(outcome.pair.original.predictions,
                                        outcome.pair.khop.predictions);
  record["gen"] = gen_report_json(outcome.gen_report);
  const auto profile = mean_probs_on_disagreed(outcome.pair);
  if (profile) {
    record["disagreed"] = {{"count", profile->disagreed_count},
                           {"mean_probs_original", profile->mean_original},
                           {"mean_probs_khop", profile->mean_khop}};
  }
  return record;
}

void write_pair_probs_csv(const RunPair& pair, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write probs csv: " + path);
  out << "class,mean_prob_original,mean_prob_khop\n";
  const auto profile = mean_probs_on_disagreed(pair);
  if (!profile) return;
  for (std::size_t c = 0; c < profile->mean_original.size(); ++c) {
    out << c << ',' << format_metric(profile->mean_original[c]) << ','
        << format_metric(profile->mean_khop[c]) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-hop-similar graph generation and GCN disagreement experiments"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "JSON config file; top-level keys name subcommands, e.g. "
                 "{\"gen-sbm\": {\"n\": 300}}");
  app.config_formatter(std::make_shared<ConfigJson>());
  std::uint64_t seed = 0;

  // ---- gen-sbm ------------------------------------------------------------
  SbmConfig sbm;
  SplitFractions fractions;
  std::string out_prefix;
  CLI::App* gen_sbm = app.add_subcommand(
      "gen-sbm", "generate an SBM dataset (graph, features, labels/splits)");
  add_sbm_options(gen_sbm, sbm, fractions);
  gen_sbm->add_option("--seed", seed, "RNG seed")->capture_default_str();
  gen_sbm->add_option("--out", out_prefix, "output path prefix")->required();
  gen_sbm->callback([&] {
    sbm.seed = seed;
    const Dataset ds = make_dataset(sbm, fractions);
    save_dataset(ds, out_prefix);
    std::cout << "wrote " << out_prefix << ".edges (" << ds.graph.num_nodes()
              << " nodes, " << ds.graph.num_edges() << " edges), "
              << out_prefix << ".features.csv, " << out_prefix
              << ".labels.csv\n";
  });

  // ---- khop-gen -----------------------------------------------------------
  GenConfig gen;
  std::string input_path, output_path, report_path;
  CLI::App* khop_gen = app.add_subcommand(
      "khop-gen", "remove non-critical edges, preserving k-hop reachability");
  khop_gen->add_option("--input", input_path, "input edge-list file")->required();
  add_gen_options(khop_gen, gen);
  khop_gen->add_option("--seed", seed, "RNG seed")->capture_default_str();
  khop_gen->add_option("--output", output_path, "output edge-list file")
      ->required();
  khop_gen->add_option("--report", report_path, "write generation report JSON");
  khop_gen->callback([&] {
    gen.seed = seed;
    const Graph g = read_edge_list_file(input_path);
    auto [out, report] = generate_batched(g, gen);
    write_edge_list_file(out, output_path);
    if (!report_path.empty()) write_gen_report_file(report, report_path);
    std::cout << "removed " << report.removal_count << " of " << g.num_edges()
              << " edges in " << report.batches_accepted << "/"
              << report.batches_tried << " accepted batches\n";
  });

  // ---- check-similar --------------------------------------------------------
  std::string graph_a, graph_b;
  int check_k = 2;
  CLI::App* check = app.add_subcommand(
      "check-similar", "test whether two graphs are k-hop similar");
  check->add_option("a", graph_a, "first edge-list file")->required();
  check->add_option("b", graph_b, "second edge-list file")->required();
  check->add_option("--k", check_k, "hop bound")->capture_default_str();
  check->callback([&] {
    const bool similar = is_k_hop_similar(read_edge_list_file(graph_a),
                                          read_edge_list_file(graph_b), check_k);
    std::cout << (similar ? "true" : "false") << '\n';
  });

  // ---- power ----------------------------------------------------------------
  std::string power_input, power_output;
  int power_k = 2;
  CLI::App* power_cmd =
      app.add_subcommand("power", "emit the k-th power of a graph");
  power_cmd->add_option("input", power_input, "input edge-list file")->required();
  power_cmd->add_option("--k", power_k, "hop bound")->capture_default_str();
  power_cmd->add_option("--output", power_output,
                        "output edge-list file (default: stdout)");
  power_cmd->callback([&] {
    const Graph p = power_graph(read_edge_list_file(power_input), power_k);
    if (power_output.empty()) {
      write_edge_list(p, std::cout);
    } else {
      write_edge_list_file(p, power_output);
    }
  });

  // ---- train ----------------------------------------------------------------
  DatasetArgs train_data;
  TrainConfig train_cfg;
  std::string checkpoint_path;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train a GCN on one dataset");
  add_dataset_options(train_cmd, train_data);
  add_train_options(train_cmd, train_cfg);
  train_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  train_cmd->add_option("--checkpoint", checkpoint_path,
                        "write best-epoch weights");
  train_cmd->callback([&] {
    clamp_default_patience(train_cmd, train_cfg);
    train_cfg.seed = seed;
    const Dataset ds = train_data.load();
    const RunResult result = train(ds, train_cfg);
    if (!checkpoint_path.empty()) {
      save_checkpoint_file(result.params, seed, checkpoint_path);
    }
    std::cout << "best_epoch=" << result.best_epoch
              << " val_loss=" << format_metric(result.val_loss[result.best_epoch])
              << " test_accuracy=" << format_metric(result.test_accuracy) << '\n';
  });

  // ---- pair -----------------------------------------------------------------
  DatasetArgs pair_data;
  GenConfig pair_gen;
  TrainConfig pair_cfg;
  std::string khop_path, pair_csv, pair_report, pair_probs, save_khop;
  bool independent_init = false;
  CLI::App* pair_cmd = app.add_subcommand(
      "pair", "train on a graph and its k-hop-similar twin, measure disagreement");
  add_dataset_options(pair_cmd, pair_data);
  add_gen_options(pair_cmd, pair_gen);
  add_train_options(pair_cmd, pair_cfg, /*with_depth=*/false);
  pair_cmd->add_option("--khop-graph", khop_path,
                       "pregenerated k-hop-similar edge list (skips generation)");
  pair_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  pair_cmd->add_option("--out-csv", pair_csv, "write metrics CSV");
  pair_cmd->add_option("--report", pair_report, "write run record JSON");
  pair_cmd->add_option("--probs-csv", pair_probs,
                       "write disagreed-node probability profile CSV");
  pair_cmd->add_option("--save-khop", save_khop,
                       "write the generated k-hop graph");
  pair_cmd->add_flag("--independent-init", independent_init,
                     "draw a separate initialization for the second model");
  pair_cmd->callback([&] {
    clamp_default_patience(pair_cmd, pair_cfg);
    pair_cfg.depth = pair_gen.k;  // the conjecture pairs depth with k
    pair_cfg.seed = mix_seed(seed, 303);
    pair_gen.seed = mix_seed(seed, 202);
    const Dataset ds = pair_data.load();
    PairOutcome outcome;
    if (khop_path.empty()) {
      outcome = run_pair(ds, pair_gen, pair_cfg, !independent_init);
    } else {
      outcome.khop_graph = read_edge_list_file(khop_path);
      if (!is_k_hop_similar(ds.graph, outcome.khop_graph, pair_gen.k)) {
        throw std::runtime_error("--khop-graph is not " +
                                 std::to_string(pair_gen.k) +
                                 "-hop similar to the dataset graph");
      }
      outcome.gen_report.removal_count =
          edge_difference(ds.graph, outcome.khop_graph);
      outcome.pair =
          train_pair_on(ds, outcome.khop_graph, pair_cfg, !independent_init);
    }
    if (!save_khop.empty()) write_edge_list_file(outcome.khop_graph, save_khop);

    const double dis = disagreement(outcome.pair.original.predictions,
                                    outcome.pair.khop.predictions);
    if (!pair_csv.empty()) {
      std::ofstream out(pair_csv);
      if (!out) throw std::runtime_error("cannot write csv: " + pair_csv);
      out << "acc_orig,acc_khop,disagreement,edges_removed\n"
          << format_metric(outcome.pair.original.test_accuracy) << ','
          << format_metric(outcome.pair.khop.test_accuracy) << ','
          << format_metric(dis) << ',' << outcome.gen_report.removal_count
          << '\n';
    }
    if (!pair_report.empty()) {
      std::ofstream out(pair_report);
      if (!out) throw std::runtime_error("cannot write report: " + pair_report);
      nlohmann::json record = pair_record_json(outcome);
      record["seed"] = seed;
      out << record.dump(2) << '\n';
    }
    if (!pair_probs.empty()) write_pair_probs_csv(outcome.pair, pair_probs);
    std::cout << "acc_orig=" << format_metric(outcome.pair.original.test_accuracy)
              << " acc_khop=" << format_metric(outcome.pair.khop.test_accuracy)
              << " disagreement=" << format_metric(dis)
              << " edges_removed=" << outcome.gen_report.removal_count << '\n';
  });

  // ---- sweep ----------------------------------------------------------------
  SweepSpec sweep;
  std::string axis_name_arg = "nodes";
  std::string sweep_csv, artifacts_dir;
  bool sweep_independent_init = false;
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "vary one SBM/model axis, aggregate paired runs into a CSV");
  add_sbm_options(sweep_cmd, sweep.base_sbm, sweep.fractions);
  add_gen_options(sweep_cmd, sweep.base_gen);
  add_train_options(sweep_cmd, sweep.base_train);
  sweep_cmd
      ->add_option("--axis", axis_name_arg,
                   "one of: nodes, intra, inter, classes, depth")
      ->capture_default_str();
  sweep_cmd->add_option("--values", sweep.values, "axis values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--runs", sweep.runs_per_point, "runs per axis value")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep.base_seed, "base seed; run j uses seed+j")
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads, "worker threads (0 = auto)")
      ->capture_default_str();
  sweep_cmd->add_option("--output", sweep_csv, "results CSV path")->required();
  sweep_cmd->add_option("--artifacts-dir", artifacts_dir,
                        "write per-run graphs, JSON records and probability CSVs");
  sweep_cmd->add_flag("--independent-init", sweep_independent_init,
                      "independent initializations within each pair");
  sweep_cmd->callback([&] {
    clamp_default_patience(sweep_cmd, sweep.base_train);
    sweep.axis = parse_axis(axis_name_arg);
    sweep.shared_init = !sweep_independent_init;
    if (!artifacts_dir.empty()) {
      std::filesystem::create_directories(artifacts_dir);
    }
    const SweepOutcome outcome = run_sweep(sweep, artifacts_dir);
    write_sweep_csv_file(outcome.rows, sweep_csv);
    if (!artifacts_dir.empty()) {
      for (std::size_t p = 0; p < outcome.rows.size(); ++p) {
        const std::string path = artifacts_dir + "/" + axis_name_arg + "_" +
                                 format_metric(outcome.rows[p].axis_value) +
                                 "_probs.csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        write_probs_csv(outcome.runs[p], out);
      }
    }
    std::cout << "wrote " << sweep_csv << " (" << outcome.rows.size()
              << " rows x " << sweep.runs_per_point << " runs)\n";
  });

  // ---- oversmooth -----------------------------------------------------------
  DatasetArgs over_data;
  TrainConfig over_cfg;
  int over_depth = 8;
  std::string over_report;
  CLI::App* over_cmd = app.add_subcommand(
      "oversmooth",
      "train deep GCNs on a graph vs. its per-component completion");
  add_dataset_options(over_cmd, over_data);
  add_train_options(over_cmd, over_cfg, /*with_depth=*/false);
  over_cmd->add_option("--depth", over_depth, "GCN layer count")
      ->capture_default_str();
  over_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  over_cmd->add_option("--report", over_report, "write report JSON");
  over_cmd->callback([&] {
    clamp_default_patience(over_cmd, over_cfg);
    over_cfg.seed = seed;
    const Dataset ds = over_data.load();
    const OversmoothReport report = oversmoothing_demo(ds, over_depth, over_cfg);
    const nlohmann::json j = oversmooth_report_json(report);
    if (!over_report.empty()) {
      std::ofstream out(over_report);
      if (!out) throw std::runtime_error("cannot write report: " + over_report);
      out << j.dump(2) << '\n';
    }
    std::cout << j.dump(2) << '\n';
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
