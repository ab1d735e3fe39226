#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "steg/csv.hpp"
#include "steg/detectors.hpp"
#include "steg/embedding_io.hpp"
#include "steg/encoder.hpp"
#include "steg/error.hpp"
#include "steg/flow_graph.hpp"
#include "steg/flow_ingest.hpp"
#include "steg/grid_search.hpp"
#include "steg/metrics.hpp"
#include "steg/node2vec.hpp"
#include "steg/projection.hpp"
#include "steg/random.hpp"
#include "steg/scattering.hpp"
#include "steg/synthetic.hpp"

namespace steg {

enum class Method { Steg, N2vEgs };
enum class DataSource { Synthetic, File };

inline std::string to_string(Method m) { return m == Method::Steg ? "steg" : "n2v-egs"; }

inline Method parse_method(const std::string& s) {
  if (s == "steg") return Method::Steg;
  if (s == "n2v-egs") return Method::N2vEgs;
  throw Error(ErrorCode::InvalidConfig, "method must be steg or n2v-egs, got '" + s + "'");
}

struct PipelineConfig {
  Method method = Method::Steg;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  DataSource source = DataSource::Synthetic;
  std::string data_path;
  std::string schema_path;  // empty: built-in NF-v2 schema
  SyntheticSpec synthetic;

  ScenarioSpec scenario;
  EncodingKind encoding = EncodingKind::Target;
  ScatteringConfig scattering;
  bool auto_padding = true;  // T from the feature width
  WalkConfig walks;
  EncoderConfig encoder;
  GridRanges grid;
  SelectionProtocol selection = SelectionProtocol::EvaluationLabels;
  std::vector<DetectorKind> detectors = all_detector_kinds();

  /// Method and node initialization must agree.
  void validate() const {
    scenario.validate();
    encoder.validate();
    walks.validate();
    if (method == Method::Steg && encoder.init_mode != InitMode::ConstantOnes) {
      throw Error(ErrorCode::InvalidConfig, "method steg requires constant-ones node features");
    }
    if (method == Method::N2vEgs && encoder.init_mode != InitMode::Node2Vec) {
      throw Error(ErrorCode::InvalidConfig, "method n2v-egs requires node2vec node features");
    }
    if (source == DataSource::File && data_path.empty()) {
      throw Error(ErrorCode::InvalidConfig, "data.source = file needs data.path");
    }
    if (detectors.empty()) throw Error(ErrorCode::InvalidConfig, "no detectors selected");
  }

  /// Switches method, node initialization and the default hidden width.
  void set_method(Method m) {
    method = m;
    encoder.init_mode = m == Method::Steg ? InitMode::ConstantOnes : InitMode::Node2Vec;
    encoder.hidden = m == Method::Steg ? 256 : 128;
  }

  std::string scenario_name() const {
    return scenario.contamination > 0.0 ? "contaminated-" + csv::format_double(scenario.contamination) : "clean";
  }

  std::string path(const std::string& file) const { return (std::filesystem::path(output_dir) / file).string(); }

  static PipelineConfig from_ptree(const boost::property_tree::ptree& t);
  static PipelineConfig from_file(const std::string& path);
  nlohmann::ordered_json to_json() const;
};

namespace detail {

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    item = item.substr(first, item.find_last_not_of(" \t") - first + 1);
    auto v = csv::parse_double(item);
    if (!v) throw Error(ErrorCode::InvalidConfig, key + ": '" + item + "' is not a number");
    out.push_back(static_cast<T>(*v));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidConfig, key + " is empty");
  return out;
}

template <typename T>
T get(const boost::property_tree::ptree& t, const std::string& key, T fallback) {
  try {
    return t.get<T>(key, fallback);
  } catch (const boost::property_tree::ptree_error& e) {
    throw Error(ErrorCode::InvalidConfig, key + ": " + e.what());
  }
}

}  // namespace detail

/// INI layout documented in configs/README.md.
inline PipelineConfig PipelineConfig::from_ptree(const boost::property_tree::ptree& t) {
  using detail::get;
  PipelineConfig c;
  c.set_method(parse_method(get<std::string>(t, "pipeline.method", "steg")));
  c.seed = get<std::uint64_t>(t, "pipeline.seed", 0);
  c.output_dir = get<std::string>(t, "pipeline.output", "out");

  const auto source = get<std::string>(t, "data.source", "synthetic");
  if (source == "synthetic") c.source = DataSource::Synthetic;
  else if (source == "file") c.source = DataSource::File;
  else throw Error(ErrorCode::InvalidConfig, "data.source must be synthetic or file");
  c.data_path = get<std::string>(t, "data.path", "");
  c.schema_path = get<std::string>(t, "data.schema", "");

  auto& s = c.synthetic;
  s.n_flows = get<std::size_t>(t, "synthetic.n_flows", s.n_flows);
  s.n_hosts = get<std::size_t>(t, "synthetic.n_hosts", s.n_hosts);
  s.attack_fraction = get<double>(t, "synthetic.attack_fraction", s.attack_fraction);
  s.anomaly_strength = get<double>(t, "synthetic.anomaly_strength", s.anomaly_strength);

  c.scenario.downsample_fraction = get<double>(t, "scenario.downsample_fraction", c.scenario.downsample_fraction);
  c.scenario.train_fraction = get<double>(t, "scenario.train_fraction", c.scenario.train_fraction);
  c.scenario.contamination = get<double>(t, "scenario.contamination", c.scenario.contamination);
  const auto encoding = get<std::string>(t, "scenario.encoding", "target");
  if (encoding == "target") c.encoding = EncodingKind::Target;
  else if (encoding == "frequency") c.encoding = EncodingKind::Frequency;
  else throw Error(ErrorCode::InvalidConfig, "scenario.encoding must be target or frequency");

  if (c.method == Method::N2vEgs && t.get_child_optional("scattering")) {
    throw Error(ErrorCode::InvalidConfig, "method n2v-egs takes no [scattering] section");
  }
  c.scattering.J = get<int>(t, "scattering.J", c.scattering.J);
  c.scattering.Q = get<int>(t, "scattering.Q", c.scattering.Q);
  c.scattering.Q2 = get<int>(t, "scattering.Q2", c.scattering.Q2);
  c.scattering.max_order = get<int>(t, "scattering.max_order", c.scattering.max_order);
  if (auto T = t.get_optional<int>("scattering.T")) {
    c.scattering.T = *T;
    c.auto_padding = false;
  }

  auto& w = c.walks;
  w.p = get<double>(t, "node2vec.p", w.p);
  w.q = get<double>(t, "node2vec.q", w.q);
  w.walk_length = get<std::size_t>(t, "node2vec.walk_length", w.walk_length);
  w.walks_per_node = get<std::size_t>(t, "node2vec.walks_per_node", w.walks_per_node);
  w.window = get<std::size_t>(t, "node2vec.window", w.window);
  w.dim = get<std::size_t>(t, "node2vec.dim", w.dim);
  w.negatives = get<std::size_t>(t, "node2vec.negatives", w.negatives);
  w.epochs = get<std::size_t>(t, "node2vec.epochs", w.epochs);
  w.learning_rate = get<double>(t, "node2vec.learning_rate", w.learning_rate);

  c.encoder.layers = get<std::size_t>(t, "encoder.layers", c.encoder.layers);
  c.encoder.hidden = get<std::size_t>(t, "encoder.hidden", c.encoder.hidden);
  if (auto init = t.get_optional<std::string>("encoder.init")) {
    if (*init == "constant") c.encoder.init_mode = InitMode::ConstantOnes;
    else if (*init == "node2vec") c.encoder.init_mode = InitMode::Node2Vec;
    else throw Error(ErrorCode::InvalidConfig, "encoder.init must be constant or node2vec");
  }

  auto& g = c.grid;
  if (auto v = t.get_optional<std::string>("grid.clusters")) g.clusters = detail::parse_list<std::size_t>(*v, "grid.clusters");
  if (auto v = t.get_optional<std::string>("grid.components")) g.components = detail::parse_list<std::size_t>(*v, "grid.components");
  if (auto v = t.get_optional<std::string>("grid.estimators")) g.estimators = detail::parse_list<std::size_t>(*v, "grid.estimators");
  if (auto v = t.get_optional<std::string>("grid.bins")) g.bins = detail::parse_list<std::size_t>(*v, "grid.bins");
  if (auto v = t.get_optional<std::string>("grid.contamination")) g.contamination = detail::parse_list<double>(*v, "grid.contamination");
  const auto selection = get<std::string>(t, "grid.selection", "evaluation");
  if (selection == "evaluation") c.selection = SelectionProtocol::EvaluationLabels;
  else if (selection == "held-out") c.selection = SelectionProtocol::HeldOut;
  else throw Error(ErrorCode::InvalidConfig, "grid.selection must be evaluation or held-out");
  if (auto v = t.get_optional<std::string>("grid.detectors")) {
    c.detectors.clear();
    std::stringstream ss(*v);
    std::string name;
    while (std::getline(ss, name, ',')) {
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      if (!name.empty()) c.detectors.push_back(parse_detector_kind(name));
    }
  }
  c.validate();
  return c;
}

inline PipelineConfig PipelineConfig::from_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config: ") + e.what());
  }
  return from_ptree(tree);
}

inline nlohmann::ordered_json PipelineConfig::to_json() const {
  nlohmann::ordered_json j;
  j["method"] = to_string(method);
  j["seed"] = seed;
  j["data"] = {{"source", source == DataSource::Synthetic ? "synthetic" : "file"},
               {"path", data_path},
               {"schema", schema_path}};
  if (source == DataSource::Synthetic) {
    j["synthetic"] = {{"n_flows", synthetic.n_flows},
                      {"n_hosts", synthetic.n_hosts},
                      {"attack_fraction", synthetic.attack_fraction},
                      {"anomaly_strength", synthetic.anomaly_strength}};
  }
  j["scenario"] = {{"downsample_fraction", scenario.downsample_fraction},
                   {"train_fraction", scenario.train_fraction},
                   {"contamination", scenario.contamination},
                   {"encoding", encoding == EncodingKind::Target ? "target" : "frequency"}};
  if (method == Method::Steg) {
    j["scattering"] = {{"J", scattering.J}, {"Q", scattering.Q}, {"Q2", scattering.Q2},
                       {"T", auto_padding ? nlohmann::ordered_json("auto") : nlohmann::ordered_json(scattering.T)},
                       {"max_order", scattering.max_order}};
  } else {
    j["node2vec"] = {{"p", walks.p}, {"q", walks.q}, {"walk_length", walks.walk_length},
                     {"walks_per_node", walks.walks_per_node}, {"window", walks.window}, {"dim", walks.dim},
                     {"negatives", walks.negatives}, {"epochs", walks.epochs},
                     {"learning_rate", walks.learning_rate}};
  }
  j["encoder"] = {{"layers", encoder.layers},
                  {"hidden", encoder.hidden},
                  {"init", encoder.init_mode == InitMode::ConstantOnes ? "constant" : "node2vec"}};
  auto kinds = nlohmann::ordered_json::array();
  for (auto k : detectors) kinds.push_back(to_string(k));
  j["grid"] = {{"detectors", kinds},
               {"clusters", grid.clusters},
               {"components", grid.components},
               {"estimators", grid.estimators},
               {"bins", grid.bins},
               {"contamination", grid.contamination},
               {"selection", selection == SelectionProtocol::EvaluationLabels ? "evaluation" : "held-out"}};
  return j;
}

// ---- stages ----

/// Runs `body`, prefixing any error with the stage name.
template <typename F>
auto run_stage(const std::string& stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), stage + ": " + e.message());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::Io, stage + ": " + e.what());
  }
}

namespace detail {

inline void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  auto out = csv::open_output(path);
  out << j.dump(2) << '\n';
}

inline nlohmann::json read_json(const std::string& path) {
  auto in = csv::open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, path + ": " + e.what());
  }
}

}  // namespace detail

inline SyntheticSpec synthetic_spec_of(const PipelineConfig& c) {
  SyntheticSpec s = c.synthetic;
  s.seed = derive_seed(c.seed, "synthetic");
  return s;
}

/// Raw flow table: generated, or read through the configured schema.
inline FlowTable load_flows(const PipelineConfig& c) {
  if (c.source == DataSource::Synthetic) return generate_synthetic(synthetic_spec_of(c));
  const Schema schema = c.schema_path.empty() ? nf_v2_schema() : Schema::from_file(c.schema_path);
  return parse_netflow(c.data_path, schema);
}

struct PreparedData {
  FlowTable train;  // encoded, sanitized, normalized
  FlowTable test;
};

/// downsample → split → encode → sanitize + normalize. Writes train.csv,
/// test.csv, encoding.json, normalization.json.
inline PreparedData stage_ingest(const PipelineConfig& c, const FlowTable& raw) {
  return run_stage("ingest", [&] {
    std::filesystem::create_directories(c.output_dir);
    const FlowTable sampled = downsample(raw, c.scenario.downsample_fraction, derive_seed(c.seed, "downsample"));
    ScenarioSpec spec = c.scenario;
    spec.seed = derive_seed(c.seed, "split");
    const ScenarioSplit split = split_scenario(sampled, spec);
    const EncodingParams enc =
        c.encoding == EncodingKind::Target ? fit_target_encoding(split.train) : fit_frequency_encoding(split.train);
    auto normalized = sanitize_and_normalize(apply_encoding(split.train, enc), apply_encoding(split.test, enc));
    write_table(c.path("train.csv"), normalized.train);
    write_table(c.path("test.csv"), normalized.test);
    detail::write_json(c.path("encoding.json"), to_json(enc));
    detail::write_json(c.path("normalization.json"), to_json(normalized.params));
    return PreparedData{std::move(normalized.train), std::move(normalized.test)};
  });
}

/// Reloads ingest artifacts; failures are tagged with the consuming `stage`.
inline PreparedData load_prepared(const PipelineConfig& c, const std::string& stage) {
  return run_stage(stage, [&] { return PreparedData{read_table(c.path("train.csv")), read_table(c.path("test.csv"))}; });
}

struct EmbeddedData {
  StoredEmbeddings train;
  StoredEmbeddings test;
};

namespace detail {

inline StoredEmbeddings stored(const EmbeddingSet& set) {
  StoredEmbeddings s;
  s.values = set.edges;
  s.row_index.assign(set.flow_index.begin(), set.flow_index.end());
  return s;
}

inline nlohmann::ordered_json graph_stats(const FlowGraph& g) {
  return {{"nodes", g.node_count()}, {"edges", g.edge_count()}, {"flows", g.flow_count()},
          {"feature_dim", g.feature_dim()}};
}

}  // namespace detail

/// Graph construction, STEG scattering augmentation or Node2Vec node
/// features, and the frozen encoder. One weight draw serves both splits.
/// Writes edges_train.bin, edges_test.bin and graph_stats.json.
inline EmbeddedData stage_embed(const PipelineConfig& c, const PreparedData& data) {
  return run_stage("embed", [&] {
    std::filesystem::create_directories(c.output_dir);
    FlowGraph train = build_graph(data.train);
    FlowGraph test = build_graph(data.test);
    nlohmann::ordered_json stats;
    stats["method"] = to_string(c.method);

    Matrix h_train, h_test;
    if (c.method == Method::Steg) {
      ScatteringConfig sc = c.scattering;
      if (c.auto_padding) sc.T = ScatteringConfig::padded_length(train.feature_dim(), sc.J);
      const ScatteringFilterBank bank = build_filterbank(sc);
      train = augment_edges(train, bank);
      test = augment_edges(test, bank);
      stats["scattering"] = {{"J", sc.J}, {"Q", sc.Q}, {"T", sc.T}, {"psi1", bank.psi1.size()},
                             {"psi2", bank.psi2.size()}, {"coefficients", bank.size()}};
      h_train = init_node_features(train, InitMode::ConstantOnes);
      h_test = init_node_features(test, InitMode::ConstantOnes);
    } else {
      // Walks over the union topology (no labels), so test hosts get rows.
      std::vector<std::pair<std::string, std::string>> endpoints;
      for (const auto* t : {&data.train, &data.test})
        for (const auto& r : t->records) endpoints.emplace_back(r.src_id, r.dst_id);
      const FlowGraph topology =
          FlowGraph::from_flows(endpoints, Matrix::Zero(static_cast<Eigen::Index>(endpoints.size()), 1));
      WalkConfig wc = c.walks;
      wc.seed = derive_seed(c.seed, "node2vec");
      const NodeEmbeddingTable table = node2vec(topology, wc);
      auto out = csv::open_output(c.path("node2vec.csv"));
      write_node_embeddings(out, table);
      h_train = init_node_features(train, InitMode::Node2Vec, table.aligned_to(train));
      h_test = init_node_features(test, InitMode::Node2Vec, table.aligned_to(test));
      stats["node2vec"] = {{"nodes", topology.node_count()}, {"dim", wc.dim}};
    }

    EncoderConfig ec = c.encoder;
    ec.weight_seed = derive_seed(c.seed, "encoder");
    const auto fan_ins = layer_input_dims(ec, static_cast<std::size_t>(h_train.cols()), train.feature_dim());
    const EncoderWeights weights = init_weights(ec, fan_ins);
    EmbeddedData out{detail::stored(forward(train, h_train, weights, ec)),
                     detail::stored(forward(test, h_test, weights, ec))};

    stats["train_graph"] = detail::graph_stats(train);
    stats["test_graph"] = detail::graph_stats(test);
    stats["edge_embedding_dim"] = out.train.values.cols();
    write_embeddings(c.path("edges_train.bin"), out.train);
    write_embeddings(c.path("edges_test.bin"), out.test);
    detail::write_json(c.path("graph_stats.json"), stats);
    return out;
  });
}

inline EmbeddedData load_embedded(const PipelineConfig& c, const std::string& stage) {
  return run_stage(stage, [&] {
    return EmbeddedData{read_embeddings(c.path("edges_train.bin")), read_embeddings(c.path("edges_test.bin"))};
  });
}

struct DetectorOutcome {
  DetectorKind kind;
  GridResult grid;
  DetectorSpec best;
  Verdict verdict;  // of the best cell on the test rows
};

inline std::string prediction_file(DetectorKind kind) { return "predictions_" + to_string(kind) + ".csv"; }

inline std::string hyperparameter_text(const DetectorSpec& s) {
  return hyperparameter_name(s.kind) + "=" + std::to_string(s.hyperparameter) +
         ";contamination=" + csv::format_double(s.contamination);
}

/// Grid search per detector, then the selected cell refit on train and
/// applied to test. Writes grid.csv, grid.json, best.json and one
/// predictions_<kind>.csv per detector.
inline std::vector<DetectorOutcome> stage_detect(const PipelineConfig& c, const EmbeddedData& emb,
                                                 const PreparedData& data) {
  return run_stage("detect", [&] {
    const std::vector<int> test_labels = labels_of(data.test);
    GridOptions options;
    options.protocol = c.selection;
    options.train_labels = labels_of(data.train);
    std::vector<DetectorOutcome> outcomes;
    std::vector<GridCell> all_cells;
    auto grid_json = nlohmann::ordered_json::array();
    nlohmann::ordered_json best_json;
    for (auto kind : c.detectors) {
      const std::uint64_t grid_seed = derive_seed(c.seed, "detector:" + to_string(kind));
      GridResult grid = grid_search(kind, emb.train.values, emb.test.values, test_labels, c.grid, grid_seed, options);
      const DetectorSpec best = spec_of(grid.best_cell(), grid_seed);
      Verdict verdict = DetectorModel::fit(emb.train.values, best).predict(emb.test.values);

      auto out = csv::open_output(c.path(prediction_file(kind)));
      csv::write_row(out, {"row_index", "score", "flag"});
      for (Eigen::Index i = 0; i < verdict.scores.size(); ++i) {
        csv::write_row(out, {std::to_string(emb.test.row_index[static_cast<std::size_t>(i)]),
                             csv::format_double(verdict.scores(i)),
                             std::to_string(verdict.flags[static_cast<std::size_t>(i)])});
      }
      for (const auto& cell : grid.cells) {
        all_cells.push_back(cell);
        grid_json.push_back(to_json(cell));
      }
      best_json[to_string(kind)] = {{"hyperparameters", hyperparameter_text(best)},
                                    {hyperparameter_name(kind), best.hyperparameter},
                                    {"contamination", best.contamination},
                                    {"seed", best.seed}};
      outcomes.push_back({kind, std::move(grid), best, std::move(verdict)});
    }
    auto out = csv::open_output(c.path("grid.csv"));
    write_grid_csv(out, all_cells);
    detail::write_json(c.path("grid.json"), grid_json);
    detail::write_json(c.path("best.json"), best_json);
    return outcomes;
  });
}

/// Confusion counts and metrics from the prediction files against the test
/// labels. Writes report.csv and report.json.
inline EvalReport stage_evaluate(const PipelineConfig& c, const PreparedData& data) {
  return run_stage("evaluate", [&] {
    const std::vector<int> labels = labels_of(data.test);
    const nlohmann::json best = detail::read_json(c.path("best.json"));
    EvalReport report;
    for (auto kind : c.detectors) {
      const std::string file = c.path(prediction_file(kind));
      auto in = csv::open_input(file);
      csv::Reader reader(in);
      reader.next();  // header
      std::vector<int> flags(labels.size(), 0);
      std::size_t seen = 0;
      while (auto row = reader.next()) {
        if (row->size() != 3) throw Error(ErrorCode::MalformedRow, file + ": expected 3 fields");
        const auto index = csv::parse_double((*row)[0]);
        if (!index || *index < 0 || static_cast<std::size_t>(*index) >= labels.size()) {
          throw Error(ErrorCode::MalformedRow, file + ": bad row_index");
        }
        flags[static_cast<std::size_t>(*index)] = (*row)[2] == "1";
        ++seen;
      }
      if (seen != labels.size()) {
        throw Error(ErrorCode::LengthMismatch, file + " has " + std::to_string(seen) + " rows for " +
                                                   std::to_string(labels.size()) + " test flows");
      }
      const std::string name = to_string(kind);
      if (!best.contains(name)) throw Error(ErrorCode::Io, "best.json has no entry for " + name);
      report.rows.push_back({to_string(c.method), name, c.scenario_name(), evaluate(flags, labels),
                             best[name]["hyperparameters"].get<std::string>(), c.seed});
    }
    auto out = csv::open_output(c.path("report.csv"));
    write_report_csv(out, report);
    detail::write_json(c.path("report.json"), to_json(report));
    return report;
  });
}

/// Test edge embeddings projected to 2-D, with labels. Writes projection.csv.
inline Projection stage_project(const PipelineConfig& c, const EmbeddedData& emb, const PreparedData& data) {
  return run_stage("project", [&] {
    const std::vector<int> all = labels_of(data.test);
    std::vector<int> labels;
    for (auto i : emb.test.row_index) labels.push_back(all.at(static_cast<std::size_t>(i)));
    Projection p = project_2d(emb.test.values);
    auto out = csv::open_output(c.path("projection.csv"));
    write_projection(out, p, labels);
    return p;
  });
}

/// Every stage in order; artifacts land in c.output_dir.
inline EvalReport run_pipeline(const PipelineConfig& c) {
  c.validate();
  std::filesystem::create_directories(c.output_dir);
  detail::write_json(c.path("config.json"), c.to_json());
  const FlowTable raw = run_stage("ingest", [&] { return load_flows(c); });
  const PreparedData data = stage_ingest(c, raw);
  const EmbeddedData emb = stage_embed(c, data);
  stage_detect(c, emb, data);
  return stage_evaluate(c, data);
}

}  // namespace steg
