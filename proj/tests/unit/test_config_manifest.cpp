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


#include <gtest/gtest.h>

#include <string>

#include "slascore/config.hpp"
#include "slascore/error.hpp"
#include "slascore/feature_store.hpp"
#include "slascore/manifest.hpp"
#include "test_support.hpp"

namespace slascore {
namespace {

using testing::TempDir;
using testing::write_bytes;

TEST(Split, NamesRoundTrip) {
  for (auto s : {Split::train, Split::dev, Split::seen_test, Split::unseen_test}) {
    EXPECT_EQ(split_from_string(to_string(s)), s);
  }
  EXPECT_THROW(split_from_string("test"), DataError);
}

TEST(UtteranceId, AllowedCharacters) {
  EXPECT_TRUE(is_valid_utterance_id("u001"));
  EXPECT_TRUE(is_valid_utterance_id("spk-3_take.2"));
  EXPECT_FALSE(is_valid_utterance_id(""));
  EXPECT_FALSE(is_valid_utterance_id(".hidden"));
  EXPECT_FALSE(is_valid_utterance_id("a/b"));
  EXPECT_FALSE(is_valid_utterance_id(".."));
  EXPECT_FALSE(is_valid_utterance_id("with space"));
}

TEST(Manifest, ParsesOptionalFields) {
  const auto e = entry_from_json(nlohmann::json::parse(
      R"({"id":"a","audio":"x.wav","raw_score":3.5,"split":"dev",
          "transcript":["one","two"],"prompt_text":"p","sts_score":0.25,"itc_score":null})"));
  EXPECT_EQ(e.id, "a");
  EXPECT_EQ(e.split, Split::dev);
  EXPECT_DOUBLE_EQ(e.raw_score, 3.5);
  EXPECT_FALSE(e.transcript.has_value());
  ASSERT_EQ(e.chunk_transcripts.size(), 2u);
  EXPECT_TRUE(e.has_transcript());
  EXPECT_EQ(*e.prompt_text, "p");
  EXPECT_DOUBLE_EQ(*e.sts_score, 0.25);
  EXPECT_FALSE(e.itc_score.has_value());
}

TEST(Manifest, RejectsBadEntries) {
  const char* bad[] = {
      R"([1,2])",
      R"({"audio":"x.wav","raw_score":3,"split":"train"})",
      R"({"id":"a","audio":"x.wav","raw_score":"3","split":"train"})",
      R"({"id":"a","audio":"x.wav","raw_score":3,"split":"holdout"})",
      R"({"id":"a","audio":"x.wav","raw_score":0.5,"split":"train"})",
      R"({"id":"a","audio":"x.wav","raw_score":5.5,"split":"train"})",
      R"({"id":"../a","audio":"x.wav","raw_score":3,"split":"train"})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(entry_from_json(nlohmann::json::parse(text)), DataError) << text;
  }
}

TEST(Manifest, ReadResolvesRelativeAudioAndSkipsBlankLines) {
  TempDir dir;
  write_bytes(dir / "m.jsonl",
              "{\"id\":\"a\",\"audio\":\"wav/a.wav\",\"raw_score\":2,\"split\":\"train\"}\n"
              "\n"
              "{\"id\":\"b\",\"audio\":\"/abs/b.wav\",\"raw_score\":4,\"split\":\"seen_test\"}\n");
  const auto entries = read_manifest(dir / "m.jsonl");
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].audio, dir.path() / "wav/a.wav");
  EXPECT_EQ(entries[1].audio, std::filesystem::path("/abs/b.wav"));
}

TEST(Manifest, ErrorsCarryLineNumbers) {
  TempDir dir;
  write_bytes(dir / "dup.jsonl",
              "{\"id\":\"a\",\"audio\":\"a.wav\",\"raw_score\":2,\"split\":\"train\"}\n"
              "{\"id\":\"a\",\"audio\":\"b.wav\",\"raw_score\":2,\"split\":\"train\"}\n");
  try {
    read_manifest(dir / "dup.jsonl");
    FAIL() << "duplicate id accepted";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  write_bytes(dir / "broken.jsonl", "{not json\n");
  EXPECT_THROW(read_manifest(dir / "broken.jsonl"), DataError);
  EXPECT_THROW(read_manifest(dir / "absent.jsonl"), IoError);
}

TEST(Manifest, WriteThenReadRoundTrip) {
  TempDir dir;
  ManifestEntry a;
  a.id = "a";
  a.audio = dir.path() / "a.wav";
  a.transcript = "hello there";
  a.sts_score = 0.125;
  a.raw_score = 4.5;
  a.split = Split::unseen_test;
  ManifestEntry b;
  b.id = "b";
  b.audio = dir.path() / "b.wav";
  b.chunk_transcripts = {"x", "y"};
  b.itc_score = -0.5;
  write_manifest(dir / "m.jsonl", {a, b});
  const auto back = read_manifest(dir / "m.jsonl");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].audio, a.audio);
  EXPECT_EQ(back[0].transcript, a.transcript);
  EXPECT_EQ(back[0].sts_score, a.sts_score);
  EXPECT_EQ(back[0].split, Split::unseen_test);
  EXPECT_EQ(back[1].chunk_transcripts, b.chunk_transcripts);
  EXPECT_EQ(back[1].itc_score, b.itc_score);
  EXPECT_DOUBLE_EQ(back[1].raw_score, 1.0);
}

TEST(RunConfig, DefaultsMatchDocumentedValues) {
  const auto c = RunConfig::from_json(nlohmann::json::object());
  const auto seg = c.segmentation();
  EXPECT_EQ(seg.chunk_len, 480000u);
  EXPECT_EQ(seg.stride, 400000u);
  EXPECT_TRUE(seg.pad_short);
  EXPECT_EQ(c.frontend.n_fft, 400u);
  EXPECT_EQ(c.frontend.hop, 160u);
  EXPECT_EQ(c.frontend.n_mels, 80u);
  EXPECT_EQ(c.backend, "mock");
  EXPECT_EQ(c.train.steps, 1000u);
  EXPECT_DOUBLE_EQ(c.train.learning_rate, 7.5e-4);
  EXPECT_EQ(c.train.batch_size, 4u);
  EXPECT_EQ(c.train.grad_accum, 2u);
  EXPECT_EQ(c.train.hidden_dim, 512u);
  EXPECT_EQ(c.jobs, 1u);
  EXPECT_TRUE(c.features.acoustic && c.features.linguistic && c.features.sts && c.features.itc);
}

TEST(RunConfig, JsonRoundTrip) {
  auto j = nlohmann::json::parse(R"({
    "segmentation": {"chunk_seconds": 10, "stride_seconds": 8, "pad_short": false},
    "frontend": {"n_mels": 40},
    "train": {"steps": 7, "learning_rate": 0.01, "seed": 9, "hidden_dim": 16},
    "features": {"acoustic": true, "linguistic": false, "sts": true, "itc": false},
    "cache_dir": "/tmp/c", "output_dir": "/tmp/o", "jobs": 3
  })");
  const auto c = RunConfig::from_json(j);
  const auto again = RunConfig::from_json(nlohmann::json::parse(c.to_json().dump()));
  EXPECT_EQ(c.to_json().dump(), again.to_json().dump());
  EXPECT_EQ(again.segmentation().chunk_len, 160000u);
  EXPECT_FALSE(again.pad_short);
  EXPECT_EQ(again.frontend.n_mels, 40u);
  EXPECT_EQ(again.train.steps, 7u);
  EXPECT_FALSE(again.features.linguistic);
  EXPECT_EQ(again.jobs, 3u);
}

TEST(RunConfig, RelativePathsResolveAgainstBaseDir) {
  const auto c = RunConfig::from_json(
      nlohmann::json::parse(R"({"cache_dir":"c","output_dir":"/abs/o","backend":"files:exp"})"),
      "/work");
  EXPECT_EQ(c.cache_dir, std::filesystem::path("/work/c"));
  EXPECT_EQ(c.output_dir, std::filesystem::path("/abs/o"));
  EXPECT_EQ(c.backend, "files:/work/exp");
}

TEST(RunConfig, InvalidSettingsRaiseConfigError) {
  const char* bad[] = {
      R"([])",
      R"({"segmentation":{"chunk_seconds":10,"stride_seconds":20}})",
      R"({"segmentation":{"chunk_seconds":-1}})",
      R"({"tokenizer":{"type":"wordpiece"}})",
      R"({"tokenizer":{"type":"bpe","vocab":"v.json"}})",
      R"({"train":{"batch_size":0}})",
      R"({"train":{"learning_rate":0}})",
      R"({"train":{"projection_activation":"swish"}})",
      R"({"jobs":"many"})",
  };
  for (const char* text : bad) {
    EXPECT_THROW(RunConfig::from_json(nlohmann::json::parse(text)), ConfigError) << text;
  }
}

TEST(RunConfig, LoadReportsUnreadableAndMalformedFiles) {
  TempDir dir;
  EXPECT_THROW(RunConfig::load(dir / "none.json"), ConfigError);
  write_bytes(dir / "bad.json", "{");
  EXPECT_THROW(RunConfig::load(dir / "bad.json"), ConfigError);
  write_bytes(dir / "ok.json", R"({"cache_dir":"store"})");
  EXPECT_EQ(RunConfig::load(dir / "ok.json").cache_dir, dir.path() / "store");
}

TEST(RunConfig, FeatureKeyTracksOnlyExtractionSettings) {
  const RunConfig base;
  const auto key = base.feature_key();
  EXPECT_EQ(key, RunConfig{}.feature_key());
  EXPECT_TRUE(is_valid_utterance_id(key));

  RunConfig c = base;
  c.train.steps = 3;
  c.train.seed = 77;
  c.features.sts = false;
  c.cache_dir = "/elsewhere";
  c.jobs = 8;
  EXPECT_EQ(c.feature_key(), key);

  auto changed = [&](auto mutate) {
    RunConfig m = base;
    mutate(m);
    return m.feature_key() != key;
  };
  EXPECT_TRUE(changed([](RunConfig& m) { m.chunk_seconds = 35; }));
  EXPECT_TRUE(changed([](RunConfig& m) { m.stride_seconds = 20; }));
  EXPECT_TRUE(changed([](RunConfig& m) { m.pad_short = false; }));
  EXPECT_TRUE(changed([](RunConfig& m) { m.frontend.n_mels = 64; }));
  EXPECT_TRUE(changed([](RunConfig& m) { m.backend = "files:/x"; }));
  EXPECT_TRUE(changed([](RunConfig& m) { m.prefix.task_token = 1; }));
  EXPECT_TRUE(changed([](RunConfig& m) { m.pooling.exclude_prefix = true; }));
}

UtteranceFeatures sample_features() {
  UtteranceFeatures f;
  f.id = "u7";
  f.v_enc = {0.5, -0.25, 1.0 / 3.0};
  f.v_dec = {1e-7, 2.0, -3.5};
  f.n_chunks = 2;
  f.aux.sts = 0.75;
  return f;
}

TEST(FeatureStore, WriteReadRoundTripInFloat32) {
  TempDir dir;
  const FeatureStore store(dir.path(), "key1");
  EXPECT_EQ(store.root(), dir.path() / "key1");
  const auto f = sample_features();
  EXPECT_FALSE(store.contains(f.id, "h"));
  store.write(f, "h");
  EXPECT_TRUE(store.contains(f.id, "h"));
  EXPECT_FALSE(store.contains(f.id, "other"));
  const auto back = store.read(f.id);
  EXPECT_EQ(back.n_chunks, 2u);
  EXPECT_EQ(back.aux.sts, 0.75);
  EXPECT_FALSE(back.aux.itc.has_value());
  ASSERT_EQ(back.v_enc.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.v_enc[i], static_cast<double>(static_cast<float>(f.v_enc[i])));
    EXPECT_EQ(back.v_dec[i], static_cast<double>(static_cast<float>(f.v_dec[i])));
  }
  for (const auto& e : std::filesystem::directory_iterator(store.root())) {
    EXPECT_EQ(e.path().filename().string().find(".tmp"), std::string::npos);
  }
}

TEST(FeatureStore, MissingOrDamagedRecords) {
  TempDir dir;
  const FeatureStore store(dir.path(), "k");
  EXPECT_THROW(store.read("nobody"), LookupError);
  store.write(sample_features(), "h");
  write_bytes((store.root() / "u7") / "features.json", "{ broken");
  EXPECT_FALSE(store.contains("u7", "h"));
  EXPECT_THROW(store.read("u7"), IntegrityError);
  store.write(sample_features(), "h");
  std::filesystem::remove((store.root() / "u7") / "v_dec.tensor");
  EXPECT_FALSE(store.contains("u7", "h"));
}

}  // namespace
}  // namespace slascore
