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

#ifndef SLASCORE_PIPELINE_HPP_
#define SLASCORE_PIPELINE_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "slascore/backend.hpp"
#include "slascore/classifier.hpp"
#include "slascore/config.hpp"
#include "slascore/feature_store.hpp"
#include "slascore/logmel.hpp"
#include "slascore/manifest.hpp"
#include "slascore/metrics.hpp"
#include "slascore/tokens.hpp"

namespace slascore {

// Per-utterance feature extraction: audio -> chunks -> (encoder, decoder)
// states -> hierarchical pooling, plus auxiliary scores.
class Extractor {
 public:
  explicit Extractor(const RunConfig& config);
  // Uses `backend` instead of the one named in the configuration; it must
  // outlive the extractor.
  Extractor(const RunConfig& config, const EmbeddingBackend& backend);

  UtteranceFeatures run(const ManifestEntry& entry) const;

  // Content hash of everything in the entry that influences its features.
  std::string entry_hash(const ManifestEntry& entry) const;

  const EmbeddingBackend& backend() const { return *backend_; }

 private:
  std::vector<std::string> transcripts_for(const ManifestEntry& entry, std::size_t n_chunks) const;

  RunConfig config_;
  SegmentationConfig segmentation_;
  LogMelFrontend frontend_;
  std::unique_ptr<EmbeddingBackend> owned_backend_;
  const EmbeddingBackend* backend_;
  std::unique_ptr<Tokenizer> tokenizer_;
  std::optional<std::filesystem::path> export_root_;
};

enum class EntryStatus { computed, cached, failed };

struct EntryOutcome {
  std::string id;
  EntryStatus status = EntryStatus::failed;
  std::string message;
};

struct ExtractSummary {
  std::filesystem::path store_root;
  std::string feature_key;
  std::vector<EntryOutcome> entries;  // manifest order

  std::size_t count(EntryStatus status) const;
  bool ok() const { return count(EntryStatus::failed) == 0; }
};

using ExtractObserver = std::function<void(const EntryOutcome&)>;

// Extracts every entry into the feature store, skipping entries whose
// record is already present with a matching hash. A failing entry is
// recorded and the run continues. Uses config.jobs worker threads.
ExtractSummary extract(std::span<const ManifestEntry> entries, const RunConfig& config,
                       const ExtractObserver& observer = {});
ExtractSummary extract(std::span<const ManifestEntry> entries, const RunConfig& config,
                       const Extractor& extractor, const ExtractObserver& observer = {});

// Classifier inputs for the active feature flags.
Example make_example(const UtteranceFeatures& features, int label, const FeatureFlags& flags);

struct LabeledSet {
  std::vector<std::string> ids;
  std::vector<Example> examples;
  std::vector<UtteranceFeatures> features;
};

// Stored features of the entries in `split` (all entries when nullopt),
// labelled with their discretised scores.
LabeledSet load_labeled(std::span<const ManifestEntry> entries, const FeatureStore& store,
                        const FeatureFlags& flags, std::optional<Split> split);

struct TrainOutcome {
  ModelArtifact model;
  std::vector<double> step_losses;
  double train_accuracy = 0.0;
  std::size_t n_train = 0;
};

// Trains on the train split using config.train and the given feature flags.
TrainOutcome train_model(std::span<const ManifestEntry> entries, const RunConfig& config,
                         const FeatureFlags& flags);

// train_model with config.features, then writes <out_dir>/model/ and
// <out_dir>/train_log.json.
TrainOutcome train_cmd(std::span<const ManifestEntry> entries, const RunConfig& config,
                       const std::filesystem::path& out_dir);

struct Evaluation {
  EvalReport report;
  std::vector<std::string> ids;
  std::vector<int> predictions;
  std::vector<int> labels;
};

Evaluation evaluate_model(const ModelArtifact& model, std::span<const ManifestEntry> entries,
                          const FeatureStore& store, Split split);

// Loads <model_dir>, evaluates it on `split` and returns the report.
// Throws IntegrityError if the model was trained on a different feature store.
EvalReport eval_cmd(const std::filesystem::path& model_dir,
                    std::span<const ManifestEntry> entries, const RunConfig& config, Split split);

struct AblationRow {
  std::string name;
  FeatureFlags flags;
  double train_accuracy = 0.0;
  std::map<Split, EvalReport> reports;
  std::optional<std::string> error;
};

struct AblationReport {
  std::vector<AblationRow> rows;
  nlohmann::ordered_json to_json() const;
};

// acoustic, linguistic, acoustic+linguistic, all, all-itc, all-sts.
std::vector<std::pair<std::string, FeatureFlags>> ablation_settings();

// Trains one model per ablation setting and evaluates it on every non-train
// split present in the manifest.
AblationReport ablate(std::span<const ManifestEntry> entries, const RunConfig& config);

// Writes v_enc.tensor and v_dec.tensor (n x d, manifest order) and labels.tsv
// (id, class, raw score, pass/fail) for one split into out_dir.
std::size_t export_embeddings(std::span<const ManifestEntry> entries, const RunConfig& config,
                              Split split, const std::filesystem::path& out_dir);

}  // namespace slascore

#endif  // SLASCORE_PIPELINE_HPP_
