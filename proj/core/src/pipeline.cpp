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

#include "slascore/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>
#include <utility>

#include "slascore/aux_scores.hpp"
#include "slascore/error.hpp"
#include "slascore/hash.hpp"
#include "slascore/pooling.hpp"
#include "slascore/tensor_io.hpp"

namespace slascore {
namespace {

const FileBackend* as_file_backend(const EmbeddingBackend& backend) {
  return dynamic_cast<const FileBackend*>(&backend);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string with_id(std::string_view id, const std::string& message) {
  return std::string(id) + ": " + message;
}

}  // namespace

Extractor::Extractor(const RunConfig& config)
    : config_(config),
      segmentation_(config.segmentation()),
      frontend_(config.frontend),
      owned_backend_(make_backend(config.backend)),
      backend_(owned_backend_.get()),
      tokenizer_(make_tokenizer(config.tokenizer)) {
  if (const auto* fb = as_file_backend(*backend_)) export_root_ = fb->root();
}

Extractor::Extractor(const RunConfig& config, const EmbeddingBackend& backend)
    : config_(config),
      segmentation_(config.segmentation()),
      frontend_(config.frontend),
      backend_(&backend),
      tokenizer_(make_tokenizer(config.tokenizer)) {
  if (const auto* fb = as_file_backend(*backend_)) export_root_ = fb->root();
}

std::vector<std::string> Extractor::transcripts_for(const ManifestEntry& entry,
                                                    std::size_t n_chunks) const {
  if (entry.has_transcript()) {
    MapTranscriptProvider provider;
    provider.add(entry.id, UtteranceTranscript{entry.chunk_transcripts, entry.transcript});
    return chunk_transcripts(provider, entry.id, n_chunks, segmentation_);
  }
  if (export_root_) {
    DirectoryTranscriptProvider provider(*export_root_);
    return chunk_transcripts(provider, entry.id, n_chunks, segmentation_);
  }
  throw LookupError("no transcript in the manifest and no export directory to read one from");
}

UtteranceFeatures Extractor::run(const ManifestEntry& entry) const {
  const AudioSignal audio = load_audio(entry.audio);
  const std::vector<Chunk> chunks = segment(audio, segmentation_);
  if (chunks.empty()) {
    throw DataError("audio shorter than one chunk (" + std::to_string(audio.size()) +
                    " samples) and padding is disabled");
  }
  const std::vector<std::string> texts = transcripts_for(entry, chunks.size());
  std::vector<TokenSequence> tokens;
  tokens.reserve(texts.size());
  for (const auto& t : texts) tokens.push_back(tokenizer_->encode(t));

  UtteranceEmbeddings emb = utterance_embeddings(entry.id, chunks, tokens, config_.prefix,
                                                 frontend_, *backend_, config_.pooling);

  UtteranceFeatures out;
  out.id = entry.id;
  out.v_enc = std::move(emb.acoustic.values);
  out.v_dec = std::move(emb.linguistic.values);
  out.n_chunks = chunks.size();
  out.aux = resolve_aux_scores(entry.id, entry.sts_score, entry.itc_score, export_root_);
  return out;
}

std::string Extractor::entry_hash(const ManifestEntry& entry) const {
  Fnv1a64 h;
  h.update(entry.id).update("\x1f");
  h.update(to_hex(hash_file(entry.audio))).update("\x1f");
  if (entry.transcript) h.update("whole:").update(*entry.transcript);
  h.update("\x1f");
  for (const auto& t : entry.chunk_transcripts) h.update(t).update("\x1e");
  h.update("\x1f");
  if (entry.sts_score) h.update(format_double(*entry.sts_score));
  h.update("\x1f");
  if (entry.itc_score) h.update(format_double(*entry.itc_score));
  return h.hex();
}

std::size_t ExtractSummary::count(EntryStatus status) const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [&](const EntryOutcome& e) { return e.status == status; }));
}

ExtractSummary extract(std::span<const ManifestEntry> entries, const RunConfig& config,
                       const ExtractObserver& observer) {
  const Extractor extractor(config);
  return extract(entries, config, extractor, observer);
}

ExtractSummary extract(std::span<const ManifestEntry> entries, const RunConfig& config,
                       const Extractor& extractor, const ExtractObserver& observer) {
  const FeatureStore store(config.cache_dir, config.feature_key());
  store.write_config(config.extraction_json());

  ExtractSummary summary;
  summary.store_root = store.root();
  summary.feature_key = store.feature_key();
  summary.entries.resize(entries.size());

  std::mutex observer_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      const ManifestEntry& entry = entries[i];
      EntryOutcome outcome{entry.id, EntryStatus::failed, {}};
      try {
        const std::string hash = extractor.entry_hash(entry);
        if (store.contains(entry.id, hash)) {
          outcome.status = EntryStatus::cached;
        } else {
          store.write(extractor.run(entry), hash);
          outcome.status = EntryStatus::computed;
        }
      } catch (const std::exception& e) {
        outcome.message = e.what();
      }
      summary.entries[i] = outcome;
      if (observer) {
        std::lock_guard lock(observer_mutex);
        observer(outcome);
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(config.jobs, 1, std::max<std::size_t>(entries.size(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  return summary;
}

Example make_example(const UtteranceFeatures& features, int label, const FeatureFlags& flags) {
  if (flags.n_streams() == 0) throw ConfigError("at least one of acoustic/linguistic must be enabled");
  Example ex;
  ex.label = label;
  if (flags.acoustic) ex.input.insert(ex.input.end(), features.v_enc.begin(), features.v_enc.end());
  if (flags.linguistic) ex.input.insert(ex.input.end(), features.v_dec.begin(), features.v_dec.end());
  if (flags.sts) {
    if (!features.aux.sts) throw DataError(with_id(features.id, "sts score is enabled but unavailable"));
    ex.aux.push_back(*features.aux.sts);
  }
  if (flags.itc) {
    if (!features.aux.itc) throw DataError(with_id(features.id, "itc score is enabled but unavailable"));
    ex.aux.push_back(*features.aux.itc);
  }
  return ex;
}

LabeledSet load_labeled(std::span<const ManifestEntry> entries, const FeatureStore& store,
                        const FeatureFlags& flags, std::optional<Split> split) {
  LabeledSet set;
  for (const auto& entry : entries) {
    if (split && entry.split != *split) continue;
    UtteranceFeatures f = store.read(entry.id);
    set.examples.push_back(make_example(f, discretize(entry.raw_score), flags));
    set.ids.push_back(entry.id);
    set.features.push_back(std::move(f));
  }
  return set;
}

TrainOutcome train_model(std::span<const ManifestEntry> entries, const RunConfig& config,
                         const FeatureFlags& flags) {
  const FeatureStore store(config.cache_dir, config.feature_key());
  const LabeledSet set = load_labeled(entries, store, flags, Split::train);
  if (set.examples.empty()) throw DataError("the manifest has no train entries");

  TrainResult result = train(set.examples, config.train);
  TrainOutcome out;
  out.train_accuracy = accuracy(set.examples, result.params);
  out.n_train = set.examples.size();
  out.step_losses = std::move(result.step_losses);
  out.model = ModelArtifact{std::move(result.params), flags, config.train, store.feature_key()};
  return out;
}

TrainOutcome train_cmd(std::span<const ManifestEntry> entries, const RunConfig& config,
                       const std::filesystem::path& out_dir) {
  TrainOutcome out = train_model(entries, config, config.features);
  std::filesystem::create_directories(out_dir);
  save_model(out_dir / "model", out.model);

  nlohmann::ordered_json log;
  log["n_train"] = out.n_train;
  log["train_accuracy"] = out.train_accuracy;
  log["final_loss"] = out.step_losses.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(out.step_losses.back());
  log["step_losses"] = out.step_losses;
  write_json_file(out_dir / "train_log.json", log);
  return out;
}

Evaluation evaluate_model(const ModelArtifact& model, std::span<const ManifestEntry> entries,
                          const FeatureStore& store, Split split) {
  const LabeledSet set = load_labeled(entries, store, model.features, split);
  if (set.examples.empty()) throw DataError("the manifest has no " + to_string(split) + " entries");
  Evaluation ev;
  ev.ids = set.ids;
  for (const auto& ex : set.examples) {
    ev.predictions.push_back(classify(ex, model.params).predicted_class());
    ev.labels.push_back(ex.label);
  }
  ev.report = evaluate(ev.predictions, ev.labels);
  return ev;
}

EvalReport eval_cmd(const std::filesystem::path& model_dir,
                    std::span<const ManifestEntry> entries, const RunConfig& config, Split split) {
  const ModelArtifact model = load_model(model_dir);
  const FeatureStore store(config.cache_dir, config.feature_key());
  if (model.feature_key != store.feature_key()) {
    throw IntegrityError("model was trained on features " + model.feature_key +
                         " but the configuration selects " + store.feature_key());
  }
  return evaluate_model(model, entries, store, split).report;
}

nlohmann::ordered_json AblationReport::to_json() const {
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    r["name"] = row.name;
    nlohmann::json flags = row.flags;
    r["features"] = flags;
    if (row.error) {
      r["error"] = *row.error;
    } else {
      r["train_accuracy"] = row.train_accuracy;
      nlohmann::ordered_json splits = nlohmann::ordered_json::object();
      for (const auto& [split, report] : row.reports) splits[to_string(split)] = report.to_json();
      r["eval"] = splits;
    }
    rows_json.push_back(std::move(r));
  }
  return nlohmann::ordered_json{{"rows", rows_json}};
}

std::vector<std::pair<std::string, FeatureFlags>> ablation_settings() {
  return {
      {"acoustic", {true, false, false, false}},
      {"linguistic", {false, true, false, false}},
      {"acoustic+linguistic", {true, true, false, false}},
      {"all", {true, true, true, true}},
      {"all-itc", {true, true, true, false}},
      {"all-sts", {true, true, false, true}},
  };
}

AblationReport ablate(std::span<const ManifestEntry> entries, const RunConfig& config) {
  std::vector<Split> eval_splits;
  for (Split s : {Split::dev, Split::seen_test, Split::unseen_test}) {
    if (std::any_of(entries.begin(), entries.end(), [&](const ManifestEntry& e) { return e.split == s; })) {
      eval_splits.push_back(s);
    }
  }
  const FeatureStore store(config.cache_dir, config.feature_key());

  AblationReport report;
  for (const auto& [name, flags] : ablation_settings()) {
    AblationRow row;
    row.name = name;
    row.flags = flags;
    try {
      const TrainOutcome trained = train_model(entries, config, flags);
      row.train_accuracy = trained.train_accuracy;
      for (Split s : eval_splits) row.reports[s] = evaluate_model(trained.model, entries, store, s).report;
    } catch (const DataError& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::size_t export_embeddings(std::span<const ManifestEntry> entries, const RunConfig& config,
                              Split split, const std::filesystem::path& out_dir) {
  const FeatureStore store(config.cache_dir, config.feature_key());
  std::vector<UtteranceFeatures> rows;
  std::vector<const ManifestEntry*> selected;
  for (const auto& entry : entries) {
    if (entry.split != split) continue;
    rows.push_back(store.read(entry.id));
    selected.push_back(&entry);
  }
  if (rows.empty()) throw DataError("the manifest has no " + to_string(split) + " entries");

  const std::size_t d = rows.front().v_enc.size();
  Matrix enc(rows.size(), d);
  Matrix dec(rows.size(), rows.front().v_dec.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].v_enc.size() != enc.cols() || rows[i].v_dec.size() != dec.cols()) {
      throw ShapeError(with_id(rows[i].id, "embedding width differs from the rest of the split"));
    }
    std::copy(rows[i].v_enc.begin(), rows[i].v_enc.end(), enc.row(i).begin());
    std::copy(rows[i].v_dec.begin(), rows[i].v_dec.end(), dec.row(i).begin());
  }

  std::filesystem::create_directories(out_dir);
  write_tensor(out_dir / "v_enc.tensor", tensor_from_matrix("v_enc", enc));
  write_tensor(out_dir / "v_dec.tensor", tensor_from_matrix("v_dec", dec));

  std::ofstream tsv(out_dir / "labels.tsv", std::ios::binary);
  if (!tsv) throw IoError("cannot write " + (out_dir / "labels.tsv").string());
  tsv << "id\tclass\traw_score\tpass\n";
  for (const ManifestEntry* e : selected) {
    const int c = discretize(e->raw_score);
    tsv << e->id << '\t' << c << '\t' << format_double(e->raw_score) << '\t'
        << (binarize(c) == PassFail::pass ? 1 : 0) << '\n';
  }
  if (!tsv) throw IoError("failed writing " + (out_dir / "labels.tsv").string());
  return rows.size();
}

}  // namespace slascore
