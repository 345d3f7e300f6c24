// Copyright 2026 The slascore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// slascore: spoken language assessment from speech-model embeddings.
//
//   slascore make-synthetic DIR
//   slascore --manifest m.jsonl [--config c.json] extract
//   slascore --manifest m.jsonl train
//   slascore --manifest m.jsonl eval --split seen_test
//   slascore --manifest m.jsonl ablate
//   slascore --manifest m.jsonl export-embeddings --split train
//   slascore gradcheck

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slascore/slascore.hpp"

namespace fs = std::filesystem;
using namespace slascore;

namespace {

struct GlobalOptions {
  std::string config;
  std::string manifest;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string cache;
  std::optional<std::size_t> jobs;
};

RunConfig load_config(const GlobalOptions& g) {
  RunConfig config = g.config.empty() ? RunConfig{} : RunConfig::load(g.config);
  if (g.seed) config.train.seed = *g.seed;
  if (!g.out.empty()) config.output_dir = g.out;
  if (!g.cache.empty()) config.cache_dir = g.cache;
  if (g.jobs) config.jobs = *g.jobs;
  return config;
}

std::vector<ManifestEntry> load_manifest(const GlobalOptions& g) {
  if (g.manifest.empty()) throw ConfigError("--manifest is required for this command");
  return read_manifest(g.manifest);
}

const char* status_name(EntryStatus s) {
  switch (s) {
    case EntryStatus::computed: return "computed";
    case EntryStatus::cached: return "cached";
    case EntryStatus::failed: return "FAILED";
  }
  return "?";
}

void print_report(const std::string& title, const EvalReport& r) {
  std::printf("%-24s n=%-4zu weighted_f1=%.4f accuracy=%.4f binary_accuracy=%.4f\n",
              title.c_str(), r.total, r.weighted_f1, r.accuracy, r.binary_accuracy);
}

int run_extract(const GlobalOptions& g) {
  const RunConfig config = load_config(g);
  const auto entries = load_manifest(g);
  const ExtractSummary summary = extract(entries, config, [](const EntryOutcome& o) {
    if (o.status == EntryStatus::failed) {
      std::fprintf(stderr, "%s: %s %s\n", o.id.c_str(), status_name(o.status), o.message.c_str());
    }
  });
  std::printf("features: %s\n", summary.store_root.string().c_str());
  std::printf("computed=%zu cached=%zu failed=%zu\n", summary.count(EntryStatus::computed),
              summary.count(EntryStatus::cached), summary.count(EntryStatus::failed));
  return summary.ok() ? 0 : 1;
}

int run_train(const GlobalOptions& g) {
  const RunConfig config = load_config(g);
  const auto entries = load_manifest(g);
  const TrainOutcome out = train_cmd(entries, config, config.output_dir);
  std::printf("trained on %zu utterances, final loss %.6f, train accuracy %.4f\n", out.n_train,
              out.step_losses.empty() ? 0.0 : out.step_losses.back(), out.train_accuracy);
  std::printf("model: %s\n", (config.output_dir / "model").string().c_str());
  return 0;
}

int run_eval(const GlobalOptions& g, const std::string& split_name, const std::string& model_dir) {
  const RunConfig config = load_config(g);
  const auto entries = load_manifest(g);
  const Split split = split_from_string(split_name);
  const fs::path model = model_dir.empty() ? config.output_dir / "model" : fs::path(model_dir);
  const EvalReport report = eval_cmd(model, entries, config, split);
  fs::create_directories(config.output_dir);
  write_json_file(config.output_dir / ("eval_" + split_name + ".json"), report.to_json());
  print_report(split_name, report);
  return 0;
}

int run_ablate(const GlobalOptions& g) {
  const RunConfig config = load_config(g);
  const auto entries = load_manifest(g);
  const AblationReport report = ablate(entries, config);
  fs::create_directories(config.output_dir);
  write_json_file(config.output_dir / "ablation.json", report.to_json());
  for (const auto& row : report.rows) {
    if (row.error) {
      std::printf("%-24s skipped: %s\n", row.name.c_str(), row.error->c_str());
      continue;
    }
    for (const auto& [split, r] : row.reports) print_report(row.name + " / " + to_string(split), r);
  }
  return 0;
}

int run_export(const GlobalOptions& g, const std::string& split_name) {
  const RunConfig config = load_config(g);
  const auto entries = load_manifest(g);
  const fs::path dir = config.output_dir / "embeddings" / split_name;
  const std::size_t n = export_embeddings(entries, config, split_from_string(split_name), dir);
  std::printf("wrote %zu rows to %s\n", n, dir.string().c_str());
  return 0;
}

int run_gradcheck(std::size_t draws, std::uint64_t seed, double tolerance) {
  GradientCheckOptions opts;
  opts.draws = draws;
  opts.seed = seed;
  const GradientCheckReport r = gradient_check(opts);
  for (std::size_t i = 0; i < r.max_error_by_tensor.size(); ++i) {
    std::printf("%-14s max rel err %.3e\n", kParameterTensorNames[i], r.max_error_by_tensor[i]);
  }
  for (std::size_t a = 0; a < r.max_error_by_fusion.size(); ++a) {
    std::printf("n_aux=%zu        max rel err %.3e\n", a, r.max_error_by_fusion[a]);
  }
  std::printf("%zu draws, %zu elements, max %.3e (tolerance %.1e)\n", r.draws, r.elements_checked,
              r.max_error, tolerance);
  return r.max_error <= tolerance ? 0 : 1;
}

int run_make_synthetic(const std::string& dir, std::size_t n, std::uint64_t seed) {
  SyntheticCorpusOptions opts;
  opts.n_utterances = n;
  opts.seed = seed;
  const auto entries = make_synthetic_corpus(dir, opts);
  std::printf("wrote %zu utterances and %s\n", entries.size(),
              (fs::path(dir) / "manifest.jsonl").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spoken language assessment from speech-model embeddings"};
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--config", g.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--manifest", g.manifest, "Utterance manifest (JSON Lines)")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Override the training seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--cache", g.cache, "Feature cache directory");
  app.add_option("--jobs", g.jobs, "Extraction worker threads")->check(CLI::PositiveNumber);

  auto* extract_cmd = app.add_subcommand("extract", "Extract utterance embeddings into the cache");
  auto* train_cmd_ = app.add_subcommand("train", "Train the classifier on the train split");

  std::string eval_split = "seen_test";
  std::string model_dir;
  auto* eval_cmd_ = app.add_subcommand("eval", "Evaluate a trained model on one split");
  eval_cmd_->add_option("--split", eval_split, "dev | seen_test | unseen_test | train");
  eval_cmd_->add_option("--model", model_dir, "Model directory (default <out>/model)");

  auto* ablate_cmd = app.add_subcommand("ablate", "Train and evaluate every feature combination");

  std::string export_split = "train";
  auto* export_cmd = app.add_subcommand("export-embeddings", "Write utterance embeddings as tensors");
  export_cmd->add_option("--split", export_split, "Split to export");

  std::size_t gc_draws = 100;
  std::uint64_t gc_seed = 7;
  double gc_tol = 1e-4;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of the classifier gradient");
  grad_cmd->add_option("--draws", gc_draws, "Random draws")->check(CLI::PositiveNumber);
  grad_cmd->add_option("--draw-seed", gc_seed, "Seed for the random draws");
  grad_cmd->add_option("--tolerance", gc_tol, "Maximum relative error");

  std::string synth_dir;
  std::size_t synth_n = 64;
  std::uint64_t synth_seed = SyntheticCorpusOptions{}.seed;
  auto* synth_cmd = app.add_subcommand("make-synthetic", "Write a labelled synthetic corpus");
  synth_cmd->add_option("dir", synth_dir, "Output directory")->required();
  synth_cmd->add_option("-n,--utterances", synth_n, "Number of utterances")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--corpus-seed", synth_seed, "Corpus seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*extract_cmd) return run_extract(g);
    if (*train_cmd_) return run_train(g);
    if (*eval_cmd_) return run_eval(g, eval_split, model_dir);
    if (*ablate_cmd) return run_ablate(g);
    if (*export_cmd) return run_export(g, export_split);
    if (*grad_cmd) return run_gradcheck(gc_draws, gc_seed, gc_tol);
    if (*synth_cmd) return run_make_synthetic(synth_dir, synth_n, synth_seed);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
