#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "khopsim/gcn.hpp"
#include "khopsim/generate.hpp"
#include "khopsim/graph.hpp"
#include "khopsim/matrix.hpp"
#include "khopsim/sbm.hpp"

namespace khopsim {

// ---------------------------------------------------------------------------
// number formatting (locale-free, byte-stable)
// ---------------------------------------------------------------------------

/// Shortest round-trippable representation of a double.
inline std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

/// Fixed 6-decimal form used in metric CSV files.
inline std::string format_metric(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

// ---------------------------------------------------------------------------
// edge-list format: first line "n m", then m lines "i j" (0-based, each
// undirected edge once); lines starting with '#' are comments.
// ---------------------------------------------------------------------------

inline Graph read_edge_list(std::istream& in) {
  std::string line;
  int line_number = 0;
  const auto next_data_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++line_number;
      std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_data_line(header)) {
    throw std::runtime_error("edge list: missing 'n m' header line");
  }
  int n = 0;
  int m = 0;
  {
    std::istringstream ss(header);
    if (!(ss >> n >> m) || n <= 0 || m < 0) {
      throw std::runtime_error("edge list: bad header at line " +
                               std::to_string(line_number));
    }
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e) {
    std::string data;
    if (!next_data_line(data)) {
      throw std::runtime_error("edge list: expected " + std::to_string(m) +
                               " edges, got " + std::to_string(e));
    }
    std::istringstream ss(data);
    int i = 0;
    int j = 0;
    if (!(ss >> i >> j)) {
      throw std::runtime_error("edge list: bad edge at line " +
                               std::to_string(line_number));
    }
    edges.emplace_back(i, j);
  }
  return from_edge_list(n, edges);
}

inline Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return read_edge_list(in);
}

inline void write_edge_list(const Graph& g, std::ostream& out) {
  const std::vector<Edge> edges = g.edges();
  out << g.num_nodes() << ' ' << edges.size() << '\n';
  for (const Edge& e : edges) {
    out << e.first << ' ' << e.second << '\n';
  }
}

inline void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  write_edge_list(g, out);
}

// ---------------------------------------------------------------------------
// feature matrix CSV: one row per node, comma-separated doubles, no header.
// ---------------------------------------------------------------------------

inline void write_features_csv(const DenseMatrix& features, std::ostream& out) {
  for (int i = 0; i < features.rows(); ++i) {
    const double* row = features.row(i);
    for (int j = 0; j < features.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(row[j]);
    }
    out << '\n';
  }
}

inline DenseMatrix read_features_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      row.push_back(std::stod(cell));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw std::runtime_error("features csv: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("features csv: empty");
  DenseMatrix m(static_cast<int>(rows.size()),
                static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      m.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// labels/split CSV: header "node,label,split", split in {train,val,test}.
// ---------------------------------------------------------------------------

inline void write_labels_csv(const std::vector<int>& labels, const Masks& masks,
                             std::ostream& out) {
  out << "node,label,split\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const char* split = masks.train[i] ? "train" : (masks.val[i] ? "val" : "test");
    out << i << ',' << labels[i] << ',' << split << '\n';
  }
}

struct LabelsAndMasks {
  std::vector<int> labels;
  Masks masks;
};

inline LabelsAndMasks read_labels_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("node,label,split", 0) != 0) {
    throw std::runtime_error("labels csv: missing 'node,label,split' header");
  }
  std::vector<int> labels;
  std::vector<std::string> splits;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string node_s, label_s, split_s;
    if (!std::getline(ss, node_s, ',') || !std::getline(ss, label_s, ',') ||
        !std::getline(ss, split_s)) {
      throw std::runtime_error("labels csv: bad row: " + line);
    }
    if (!split_s.empty() && split_s.back() == '\r') split_s.pop_back();
    const std::size_t node = std::stoul(node_s);
    if (node != labels.size()) {
      throw std::runtime_error("labels csv: rows must be in node order");
    }
    labels.push_back(std::stoi(label_s));
    splits.push_back(split_s);
  }
  LabelsAndMasks result;
  result.labels = std::move(labels);
  const std::size_t n = result.labels.size();
  result.masks.train.assign(n, 0);
  result.masks.val.assign(n, 0);
  result.masks.test.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (splits[i] == "train") {
      result.masks.train[i] = 1;
    } else if (splits[i] == "val") {
      result.masks.val[i] = 1;
    } else if (splits[i] == "test") {
      result.masks.test[i] = 1;
    } else {
      throw std::runtime_error("labels csv: unknown split '" + splits[i] + "'");
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// dataset bundle: <prefix>.edges, <prefix>.features.csv, <prefix>.labels.csv
// ---------------------------------------------------------------------------

inline void save_dataset(const Dataset& ds, const std::string& prefix) {
  write_edge_list_file(ds.graph, prefix + ".edges");
  {
    std::ofstream out(prefix + ".features.csv");
    if (!out) throw std::runtime_error("cannot write " + prefix + ".features.csv");
    write_features_csv(ds.features, out);
  }
  {
    std::ofstream out(prefix + ".labels.csv");
    if (!out) throw std::runtime_error("cannot write " + prefix + ".labels.csv");
    write_labels_csv(ds.labels, ds.masks, out);
  }
}

inline Dataset load_dataset(const std::string& graph_path,
                            const std::string& features_path,
                            const std::string& labels_path) {
  Dataset ds;
  ds.graph = read_edge_list_file(graph_path);
  {
    std::ifstream in(features_path);
    if (!in) throw std::runtime_error("cannot open " + features_path);
    ds.features = read_features_csv(in);
  }
  {
    std::ifstream in(labels_path);
    if (!in) throw std::runtime_error("cannot open " + labels_path);
    LabelsAndMasks lm = read_labels_csv(in);
    ds.labels = std::move(lm.labels);
    ds.masks = std::move(lm.masks);
  }
  if (ds.features.rows() != ds.graph.num_nodes() ||
      static_cast<int>(ds.labels.size()) != ds.graph.num_nodes()) {
    throw std::runtime_error("dataset: node counts disagree across files");
  }
  return ds;
}

inline Dataset load_dataset_prefix(const std::string& prefix) {
  return load_dataset(prefix + ".edges", prefix + ".features.csv",
                      prefix + ".labels.csv");
}

// ---------------------------------------------------------------------------
// model checkpoint: line 1 is a JSON header {"dims":[...],"depth":L,"seed":s},
// followed by one CSV line per weight-matrix row, matrices in layer order.
// ---------------------------------------------------------------------------

inline void save_checkpoint(const GcnParams& params, std::uint64_t seed,
                            std::ostream& out) {
  nlohmann::json header;
  header["dims"] = params.dims();
  header["depth"] = params.depth();
  header["seed"] = seed;
  out << header.dump() << '\n';
  for (const DenseMatrix& w : params.layers) {
    for (int i = 0; i < w.rows(); ++i) {
      const double* row = w.row(i);
      for (int j = 0; j < w.cols(); ++j) {
        if (j > 0) out << ',';
        out << format_double(row[j]);
      }
      out << '\n';
    }
  }
}

inline void save_checkpoint_file(const GcnParams& params, std::uint64_t seed,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  save_checkpoint(params, seed, out);
}

struct Checkpoint {
  GcnParams params;
  std::uint64_t seed = 0;
};

inline Checkpoint load_checkpoint(std::istream& in) {
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error("checkpoint: missing JSON header");
  }
  const nlohmann::json header = nlohmann::json::parse(header_line);
  const std::vector<int> dims = header.at("dims").get<std::vector<int>>();
  const int depth = header.at("depth").get<int>();
  if (static_cast<int>(dims.size()) != depth + 1) {
    throw std::runtime_error("checkpoint: dims/depth mismatch");
  }
  Checkpoint ckpt;
  ckpt.seed = header.at("seed").get<std::uint64_t>();
  for (int l = 0; l < depth; ++l) {
    DenseMatrix w(dims[static_cast<std::size_t>(l)],
                  dims[static_cast<std::size_t>(l) + 1]);
    for (int i = 0; i < w.rows(); ++i) {
      std::string line;
      if (!std::getline(in, line)) {
        throw std::runtime_error("checkpoint: truncated weight payload");
      }
      std::istringstream ss(line);
      std::string cell;
      for (int j = 0; j < w.cols(); ++j) {
        if (!std::getline(ss, cell, ',')) {
          throw std::runtime_error("checkpoint: short weight row");
        }
        w.at(i, j) = std::stod(cell);
      }
    }
    ckpt.params.layers.push_back(std::move(w));
  }
  return ckpt;
}

inline Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  return load_checkpoint(in);
}

// ---------------------------------------------------------------------------
// generation report JSON
// ---------------------------------------------------------------------------

inline nlohmann::json gen_report_json(const GenReport& report) {
  nlohmann::json j;
  j["removed"] = nlohmann::json::array();
  for (const Edge& e : report.removed_edges) {
    j["removed"].push_back({e.first, e.second});
  }
  j["removal_count"] = report.removal_count;
  j["batches_tried"] = report.batches_tried;
  j["batches_accepted"] = report.batches_accepted;
  return j;
}

inline void write_gen_report_file(const GenReport& report,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << gen_report_json(report).dump(2) << '\n';
}

}  // namespace khopsim
