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

#ifndef SLASCORE_AUX_SCORES_HPP_
#define SLASCORE_AUX_SCORES_HPP_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace slascore {

enum class SentenceSource { prompt, response };
enum class VisionTextSource { image, text };

struct SentenceEmbedding {
  std::vector<double> values;
  SentenceSource source = SentenceSource::response;
};

struct VisionTextEmbedding {
  std::vector<double> values;
  VisionTextSource source = VisionTextSource::text;
};

struct AuxScores {
  std::optional<double> sts;  // prompt coherence, unbounded dot score
  std::optional<double> itc;  // image relevance, cosine in [-1, 1]
};

// Dot product of prompt and response sentence embeddings.
// Throws ShapeError on a dimension mismatch.
double sts_score(const SentenceEmbedding& prompt, const SentenceEmbedding& response);

// Cosine similarity of image and text embeddings. Throws ShapeError on a
// dimension mismatch, DegenerateVectorError when either norm is zero.
double itc_score(const VisionTextEmbedding& image, const VisionTextEmbedding& text);

// The learner response used for both scores: chunk transcripts joined by
// single spaces, overlap duplicates kept.
std::string response_text(std::span<const std::string> chunk_texts);

// Scores for one utterance. Manifest scalars win; otherwise, when
// `tensor_root` is given, the scores are computed from
// <root>/<id>/{sts_q,sts_t,itc_img,itc_txt}.tensor if present.
AuxScores resolve_aux_scores(std::string_view utterance_id,
                             std::optional<double> manifest_sts,
                             std::optional<double> manifest_itc,
                             const std::optional<std::filesystem::path>& tensor_root);

}  // namespace slascore

#endif  // SLASCORE_AUX_SCORES_HPP_
