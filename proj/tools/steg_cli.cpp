#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "steg/pipeline.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> method;
  std::optional<double> contamination;
  bool full_dataset = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "INI config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("-o,--out", o.out, "output directory");
  cmd->add_option("--method", o.method, "steg or n2v-egs")->check(CLI::IsMember({"steg", "n2v-egs"}));
  cmd->add_option("--contamination", o.contamination, "train attack share")->check(CLI::IsMember({0.0, 0.04}));
  cmd->add_flag("--full-dataset", o.full_dataset, "skip downsampling");
}

steg::PipelineConfig resolve(const Overrides& o) {
  steg::PipelineConfig c = o.config.empty() ? steg::PipelineConfig{} : steg::PipelineConfig::from_file(o.config);
  if (o.method) c.set_method(steg::parse_method(*o.method));
  if (o.seed) c.seed = *o.seed;
  if (o.out) c.output_dir = *o.out;
  if (o.contamination) c.scenario.contamination = *o.contamination;
  if (o.full_dataset) c.scenario.downsample_fraction = 1.0;
  c.validate();
  return c;
}

void print_report(const steg::EvalReport& report) {
  std::cout << "detector  accuracy  macro_f1  detection_rate  " << "hyperparameters\n";
  for (const auto& r : report.rows) {
    std::printf("%-8s  %8.4f  %8.4f  %14.4f  %s\n", r.detector.c_str(), r.metrics.accuracy, r.metrics.macro_f1,
                r.metrics.detection_rate, r.hyperparameters.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-based unsupervised network intrusion detection"};
  app.require_subcommand(1);

  steg::SyntheticSpec synth;
  std::string synth_out = "synthetic.csv";
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic NetFlow CSV");
  synth_cmd->add_option("-o,--out", synth_out, "output CSV path");
  synth_cmd->add_option("--seed", synth.seed, "seed");
  synth_cmd->add_option("--flows", synth.n_flows, "number of flows");
  synth_cmd->add_option("--hosts", synth.n_hosts, "number of benign hosts");
  synth_cmd->add_option("--attack-fraction", synth.attack_fraction, "share of attack flows");
  synth_cmd->add_option("--strength", synth.anomaly_strength, "attack mean shift in σ units");

  Overrides o;
  auto* run_cmd = app.add_subcommand("run", "all stages: ingest, embed, detect, evaluate");
  auto* ingest_cmd = app.add_subcommand("ingest", "downsample, split, encode, normalize");
  auto* embed_cmd = app.add_subcommand("embed", "graph construction and edge embeddings");
  auto* detect_cmd = app.add_subcommand("detect", "grid search and predictions per detector");
  auto* eval_cmd = app.add_subcommand("evaluate", "metrics report from predictions");
  auto* project_cmd = app.add_subcommand("project", "2-D projection of test edge embeddings");
  for (auto* cmd : {run_cmd, ingest_cmd, embed_cmd, detect_cmd, eval_cmd, project_cmd}) add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      const auto parent = std::filesystem::path(synth_out).parent_path();
      if (!parent.empty()) std::filesystem::create_directories(parent);
      auto out = steg::csv::open_output(synth_out);
      steg::write_synthetic_csv(out, synth);
      std::cout << "wrote " << synth_out << '\n';
      return EXIT_SUCCESS;
    }
    const steg::PipelineConfig c = resolve(o);
    if (run_cmd->parsed()) {
      print_report(steg::run_pipeline(c));
    } else if (ingest_cmd->parsed()) {
      const auto raw = steg::run_stage("ingest", [&] { return steg::load_flows(c); });
      const auto data = steg::stage_ingest(c, raw);
      std::cout << "train " << data.train.size() << " flows, test " << data.test.size() << " flows\n";
    } else if (embed_cmd->parsed()) {
      const auto emb = steg::stage_embed(c, steg::load_prepared(c, "embed"));
      std::cout << "edge embeddings " << emb.train.values.rows() << " + " << emb.test.values.rows() << " x "
                << emb.train.values.cols() << '\n';
    } else if (detect_cmd->parsed()) {
      const auto data = steg::load_prepared(c, "detect");
      for (const auto& r : steg::stage_detect(c, steg::load_embedded(c, "detect"), data)) {
        std::cout << steg::to_string(r.kind) << ": " << steg::hyperparameter_text(r.best) << '\n';
      }
    } else if (eval_cmd->parsed()) {
      print_report(steg::stage_evaluate(c, steg::load_prepared(c, "evaluate")));
    } else if (project_cmd->parsed()) {
      const auto p = steg::stage_project(c, steg::load_embedded(c, "project"), steg::load_prepared(c, "project"));
      std::cout << "explained variance " << p.explained_variance << '\n';
    }
  } catch (const steg::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
