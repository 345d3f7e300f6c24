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

#include <cmath>
#include <random>

#include "slascore/aux_scores.hpp"
#include "slascore/error.hpp"
#include "slascore/tensor_io.hpp"
#include "test_support.hpp"

namespace slascore {
namespace {

using testing::TempDir;

SentenceEmbedding se(std::vector<double> v) { return {std::move(v), SentenceSource::prompt}; }
VisionTextEmbedding vt(std::vector<double> v) { return {std::move(v), VisionTextSource::image}; }

TEST(Sts, DotProductCases) {
  EXPECT_DOUBLE_EQ(sts_score(se({0.6, 0.8}), se({0.6, 0.8})), 1.0);
  EXPECT_EQ(sts_score(se({1, 0, 0}), se({0, 3, 0})), 0.0);
  const std::vector<double> e{0.3, -1.2, 2.0};
  const std::vector<double> e2{0.6, -2.4, 4.0};
  EXPECT_DOUBLE_EQ(sts_score(se(e), se(e2)), 2.0 * sts_score(se(e), se(e)));
  EXPECT_THROW(sts_score(se({1, 2}), se({1, 2, 3})), ShapeError);
}

TEST(Sts, SymmetricAndBilinearOnRandomVectors) {
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(12), b(12), c(12);
    for (std::size_t j = 0; j < 12; ++j) { a[j] = g(rng); b[j] = g(rng); c[j] = g(rng); }
    EXPECT_NEAR(sts_score(se(a), se(b)), sts_score(se(b), se(a)), 1e-12);
    std::vector<double> bc(12);
    for (std::size_t j = 0; j < 12; ++j) bc[j] = 2.0 * b[j] - 0.5 * c[j];
    EXPECT_NEAR(sts_score(se(a), se(bc)), 2.0 * sts_score(se(a), se(b)) - 0.5 * sts_score(se(a), se(c)), 1e-10);
  }
}

TEST(Itc, CosineCases) {
  EXPECT_DOUBLE_EQ(itc_score(vt({1, 2, 3}), vt({1, 2, 3})), 1.0);
  EXPECT_DOUBLE_EQ(itc_score(vt({1, 2, 3}), vt({-1, -2, -3})), -1.0);
  EXPECT_NEAR(itc_score(vt({1, 2, 3}), vt({0.5, -1, 4})), itc_score(vt({7, 14, 21}), vt({0.05, -0.1, 0.4})), 1e-15);
  EXPECT_THROW(itc_score(vt({0, 0}), vt({1, 1})), DegenerateVectorError);
  EXPECT_THROW(itc_score(vt({1, 1}), vt({0, 0})), DegenerateVectorError);
  EXPECT_THROW(itc_score(vt({1, 1}), vt({1})), ShapeError);
}

TEST(Itc, BoundedAndSymmetricOnRandomVectors) {
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  for (int i = 0; i < 500; ++i) {
    std::vector<double> a(7), b(7);
    for (std::size_t j = 0; j < 7; ++j) { a[j] = g(rng); b[j] = i % 5 == 0 ? a[j] * 3.0 : g(rng); }
    const double s = itc_score(vt(a), vt(b));
    EXPECT_LE(std::abs(s), 1.0 + 1e-6);
    EXPECT_NEAR(s, itc_score(vt(b), vt(a)), 1e-15);
  }
}

TEST(ResponseText, JoinsWithSingleSpacesKeepingDuplicates) {
  const std::vector<std::string> parts{"the cat sat", "sat on", "the mat"};
  EXPECT_EQ(response_text(parts), "the cat sat sat on the mat");
  EXPECT_EQ(response_text(std::vector<std::string>{}), "");
}

TEST(ResolveAux, ManifestScalarsTakePrecedence) {
  TempDir dir;
  std::filesystem::create_directories(dir / "u");
  write_tensor(dir / "u/sts_q.tensor", Tensor{"q", {2}, {1.0f, 2.0f}});
  write_tensor(dir / "u/sts_t.tensor", Tensor{"t", {1, 2}, {3.0f, 4.0f}});
  write_tensor(dir / "u/itc_img.tensor", Tensor{"i", {2}, {1.0f, 0.0f}});
  write_tensor(dir / "u/itc_txt.tensor", Tensor{"x", {2}, {1.0f, 1.0f}});

  const auto from_tensors = resolve_aux_scores("u", std::nullopt, std::nullopt, dir.path());
  EXPECT_DOUBLE_EQ(*from_tensors.sts, 11.0);
  EXPECT_NEAR(*from_tensors.itc, 1.0 / std::sqrt(2.0), 1e-7);

  const auto scalars = resolve_aux_scores("u", 0.25, -0.5, dir.path());
  EXPECT_EQ(*scalars.sts, 0.25);
  EXPECT_EQ(*scalars.itc, -0.5);

  const auto nothing = resolve_aux_scores("other", std::nullopt, std::nullopt, dir.path());
  EXPECT_FALSE(nothing.sts);
  EXPECT_FALSE(nothing.itc);
  EXPECT_FALSE(resolve_aux_scores("u", std::nullopt, std::nullopt, std::nullopt).sts);
}

}  // namespace
}  // namespace slascore
