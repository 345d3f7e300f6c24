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

#ifndef SLASCORE_SLASCORE_HPP_
#define SLASCORE_SLASCORE_HPP_

#include "slascore/audio.hpp"
#include "slascore/aux_scores.hpp"
#include "slascore/backend.hpp"
#include "slascore/classifier.hpp"
#include "slascore/config.hpp"
#include "slascore/error.hpp"
#include "slascore/feature_store.hpp"
#include "slascore/gradient_check.hpp"
#include "slascore/hash.hpp"
#include "slascore/logmel.hpp"
#include "slascore/manifest.hpp"
#include "slascore/matrix.hpp"
#include "slascore/metrics.hpp"
#include "slascore/pipeline.hpp"
#include "slascore/pooling.hpp"
#include "slascore/rng.hpp"
#include "slascore/synthetic.hpp"
#include "slascore/tensor_io.hpp"
#include "slascore/tokens.hpp"

#endif  // SLASCORE_SLASCORE_HPP_
