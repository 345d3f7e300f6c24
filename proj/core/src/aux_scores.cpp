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

#include "slascore/aux_scores.hpp"

#include <cmath>

#include "slascore/error.hpp"
#include "slascore/tensor_io.hpp"

namespace slascore {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("embedding widths differ: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

std::optional<std::vector<double>> maybe_vector(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  const Tensor t = read_tensor(path);
  // Accept [d] or [1, d].
  if (t.shape.size() == 2 && t.shape[0] == 1) return std::vector<double>(t.data.begin(), t.data.end());
  return vector_from_tensor(t);
}

}  // namespace

double sts_score(const SentenceEmbedding& prompt, const SentenceEmbedding& response) {
  return dot(prompt.values, response.values);
}

double itc_score(const VisionTextEmbedding& image, const VisionTextEmbedding& text) {
  const double num = dot(image.values, text.values);
  const double image_norm = std::sqrt(dot(image.values, image.values));
  const double text_norm = std::sqrt(dot(text.values, text.values));
  if (image_norm == 0.0 || text_norm == 0.0) {
    throw DegenerateVectorError("cosine similarity of a zero-norm embedding");
  }
  return num / (image_norm * text_norm);
}

std::string response_text(std::span<const std::string> chunk_texts) {
  std::string out;
  for (std::size_t i = 0; i < chunk_texts.size(); ++i) {
    if (i > 0) out += ' ';
    out += chunk_texts[i];
  }
  return out;
}

AuxScores resolve_aux_scores(std::string_view utterance_id,
                             std::optional<double> manifest_sts,
                             std::optional<double> manifest_itc,
                             const std::optional<std::filesystem::path>& tensor_root) {
  AuxScores scores{manifest_sts, manifest_itc};
  if (!tensor_root) return scores;
  const auto dir = *tensor_root / std::string(utterance_id);
  if (!scores.sts) {
    auto q = maybe_vector(dir / "sts_q.tensor");
    auto t = maybe_vector(dir / "sts_t.tensor");
    if (q && t) {
      scores.sts = sts_score({std::move(*q), SentenceSource::prompt},
                             {std::move(*t), SentenceSource::response});
    }
  }
  if (!scores.itc) {
    auto img = maybe_vector(dir / "itc_img.tensor");
    auto txt = maybe_vector(dir / "itc_txt.tensor");
    if (img && txt) {
      scores.itc = itc_score({std::move(*img), VisionTextSource::image},
                             {std::move(*txt), VisionTextSource::text});
    }
  }
  return scores;
}

}  // namespace slascore
