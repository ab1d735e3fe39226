#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "steg/pipeline.hpp"

namespace {

using namespace steg;
namespace fs = std::filesystem;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("steg_pipeline_test_" + name);
  fs::remove_all(dir);
  return dir.string();
}

// Small and fast: 1500 flows, one grid value per detector.
PipelineConfig small(Method m, const std::string& name) {
  PipelineConfig c;
  c.set_method(m);
  c.seed = 17;
  c.output_dir = scratch(name);
  c.synthetic.n_flows = 1500;
  c.synthetic.n_hosts = 60;
  c.scenario.downsample_fraction = 1.0;
  c.walks.walks_per_node = 2;
  c.walks.walk_length = 20;
  c.walks.epochs = 1;
  c.grid.clusters = {3};
  c.grid.components = {5};
  c.grid.estimators = {20};
  c.grid.bins = {10};
  c.grid.contamination = {0.01, 0.1};
  return c;
}

PipelineConfig from_ini(const std::string& text) {
  std::stringstream ss(text);
  boost::property_tree::ptree tree;
  boost::property_tree::ini_parser::read_ini(ss, tree);
  return PipelineConfig::from_ptree(tree);
}

TEST(Pipeline, StegReportHasOneRowPerDetector) {
  const auto c = small(Method::Steg, "steg");
  const EvalReport report = run_pipeline(c);
  ASSERT_EQ(report.rows.size(), 5u);
  for (const auto& r : report.rows) {
    EXPECT_EQ(r.method, "steg");
    EXPECT_EQ(r.scenario, "clean");
    EXPECT_GE(r.metrics.macro_f1, 0.0);
    EXPECT_LE(r.metrics.macro_f1, 1.0);
  }
  for (const char* f : {"config.json", "train.csv", "test.csv", "encoding.json", "normalization.json",
                        "edges_train.bin", "edges_test.bin", "graph_stats.json", "grid.csv", "grid.json",
                        "best.json", "report.csv", "report.json", "predictions_hbos.csv"}) {
    EXPECT_TRUE(fs::exists(c.path(f))) << f;
  }
}

TEST(Pipeline, StegWidthFollowsScatteringPathCount) {
  const auto c = small(Method::Steg, "steg_width");
  const FlowTable raw = load_flows(c);
  const auto data = stage_ingest(c, raw);
  const auto emb = stage_embed(c, data);
  EXPECT_EQ(emb.train.values.cols(), 2 * 256);
  const auto stats = detail::read_json(c.path("graph_stats.json"));
  const std::size_t d = data.train.numeric_names.size();
  ScatteringConfig sc;
  sc.T = ScatteringConfig::padded_length(d, sc.J);
  const std::size_t P = build_filterbank(sc).size();
  EXPECT_EQ(stats["scattering"]["coefficients"].get<std::size_t>(), P);
  EXPECT_EQ(stats["train_graph"]["feature_dim"].get<std::size_t>(), d + P);
  EXPECT_EQ(emb.train.values.rows(), static_cast<Eigen::Index>(data.train.size()));
  EXPECT_EQ(emb.test.values.rows(), static_cast<Eigen::Index>(data.test.size()));
}

TEST(Pipeline, N2vHidden128GivesWidth256) {
  auto c = small(Method::N2vEgs, "n2v");
  EXPECT_EQ(c.encoder.hidden, 128u);
  const auto data = stage_ingest(c, load_flows(c));
  const auto emb = stage_embed(c, data);
  EXPECT_EQ(read_embeddings(c.path("edges_train.bin")).values.cols(), 256);
  EXPECT_EQ(emb.test.values.cols(), 256);
  EXPECT_TRUE(fs::exists(c.path("node2vec.csv")));
}

TEST(Pipeline, SameConfigSameReportBytes) {
  auto a = small(Method::Steg, "det_a");
  auto b = small(Method::Steg, "det_b");
  run_pipeline(a);
  run_pipeline(b);
  EXPECT_EQ(slurp(a.path("report.csv")), slurp(b.path("report.csv")));
  EXPECT_EQ(slurp(a.path("report.json")), slurp(b.path("report.json")));
  EXPECT_EQ(slurp(a.path("grid.csv")), slurp(b.path("grid.csv")));
}

TEST(Pipeline, StagesFromDiskMatchInMemoryRun) {
  auto c = small(Method::Steg, "staged");
  const EvalReport direct = run_pipeline(c);
  const std::string expected = slurp(c.path("report.csv"));
  fs::remove(c.path("report.csv"));
  // Re-run detect and evaluate from the persisted artifacts.
  stage_detect(c, load_embedded(c, "detect"), load_prepared(c, "detect"));
  stage_evaluate(c, load_prepared(c, "evaluate"));
  EXPECT_EQ(slurp(c.path("report.csv")), expected);
}

TEST(Pipeline, ContaminatedScenarioIsNamed) {
  auto c = small(Method::Steg, "contaminated");
  c.scenario.contamination = 0.04;
  c.detectors = {DetectorKind::IForest};
  const auto report = run_pipeline(c);
  ASSERT_EQ(report.rows.size(), 1u);
  EXPECT_EQ(report.rows[0].scenario, "contaminated-0.04");
}

TEST(Pipeline, FrequencyEncodingSwitch) {
  auto c = from_ini("[scenario]\nencoding = frequency\n");
  EXPECT_EQ(c.encoding, EncodingKind::Frequency);
  c.output_dir = scratch("frequency");
  c.synthetic.n_flows = 500;
  c.scenario.downsample_fraction = 1.0;
  stage_ingest(c, load_flows(c));
  EXPECT_EQ(detail::read_json(c.path("encoding.json"))["kind"], "frequency");
}

TEST(PipelineConfig, DefaultsFromIni) {
  const auto c = from_ini("[pipeline]\nmethod = n2v-egs\nseed = 4\n");
  EXPECT_EQ(c.method, Method::N2vEgs);
  EXPECT_EQ(c.encoder.init_mode, InitMode::Node2Vec);
  EXPECT_EQ(c.encoder.hidden, 128u);
  EXPECT_EQ(c.seed, 4u);
  const auto s = from_ini("[grid]\nclusters = 2, 4\ndetectors = kmeans, hbos\n");
  EXPECT_EQ(s.encoder.hidden, 256u);
  EXPECT_EQ(s.grid.clusters, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(s.detectors, (std::vector<DetectorKind>{DetectorKind::KMeans, DetectorKind::Hbos}));
}

TEST(PipelineConfig, RejectsInconsistentConfigs) {
  const char* bad[] = {
      "[pipeline]\nmethod = steg\n[encoder]\ninit = node2vec\n",
      "[pipeline]\nmethod = n2v-egs\n[encoder]\ninit = constant\n",
      "[pipeline]\nmethod = n2v-egs\n[scattering]\nJ = 4\n",
      "[pipeline]\nmethod = gcn\n",
      "[scenario]\nencoding = onehot\n",
      "[scenario]\ntrain_fraction = 1.5\n",
      "[data]\nsource = file\n",
      "[grid]\nclusters = two\n",
      "[grid]\ndetectors = svm\n",
      "[encoder]\nhidden = 0\n",
      "[scattering]\nT = 48\n",
  };
  for (const char* text : bad) {
    try {
      auto c = from_ini(text);
      if (c.method == Method::Steg && !c.auto_padding) build_filterbank(c.scattering);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << text;
    }
  }
}

TEST(Pipeline, ErrorsCarryStageNameAndKeepArtifacts) {
  auto c = small(Method::Steg, "failing");
  const auto data = stage_ingest(c, load_flows(c));
  // No detect stage ran: evaluate finds no best.json.
  try {
    stage_evaluate(c, data);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.message().rfind("evaluate: ", 0), 0u) << e.what();
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
  EXPECT_TRUE(fs::exists(c.path("train.csv")));

  PipelineConfig f;
  f.source = DataSource::File;
  f.data_path = "/nonexistent/flows.csv";
  f.output_dir = scratch("missing_input");
  try {
    run_pipeline(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.message().rfind("ingest: ", 0), 0u) << e.what();
  }
}

TEST(Pipeline, ProjectionOfTestEmbeddings) {
  auto c = small(Method::Steg, "project");
  const auto data = stage_ingest(c, load_flows(c));
  const auto emb = stage_embed(c, data);
  const auto p = stage_project(c, emb, data);
  EXPECT_EQ(p.points.rows(), emb.test.values.rows());
  EXPECT_GT(p.explained_variance, 0.0);
  EXPECT_LE(p.explained_variance, 1.0 + 1e-12);
}

}  // namespace
