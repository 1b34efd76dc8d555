//  Copyright 2026 The ctxemb Authors. All Rights Reserved.
//
//  Licensed under the Apache License, Version 2.0 (the "License");
//  you may not use this file except in compliance with the License.
//  You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
//  Unless required by applicable law or agreed to in writing, software
//  distributed under the License is distributed on an "AS IS" BASIS,
//  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//  See the License for the specific language governing permissions and
//  limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ctxemb/contexts.hpp"
#include "ctxemb/corpus.hpp"

namespace ctxemb {

/// Pairs plus the context vocabulary their context ids refer to.
struct PairSet {
  std::vector<WeightedPair> pairs;
  ContextVocabulary contexts;
  std::size_t skipped = 0;  // OOV edges or rare contexts, per extractor
};

struct WindowOptions {
  int window = 5;
  bool dynamic = true;
  double subsample = 0.0;  // 0 disables frequent-word subsampling
  std::uint64_t seed = 1;
};

/// Window contexts over the whole corpus with one RNG stream in corpus order.
/// The context vocabulary is a copy of the word vocabulary.
PairSet extract_window_pairs(std::span<const TokenizedSentence> corpus, const Vocabulary& words,
                             const WindowOptions& options);

/// Collapses prepositions, builds the context vocabulary at ctx_min_count,
/// then extracts dependency pairs.
PairSet extract_dep_pairs(std::span<const ParsedSentence> corpus, const Vocabulary& words,
                          std::uint64_t ctx_min_count);

/// Substitute pairs under the per-type cap. The context vocabulary is a copy
/// of the word vocabulary.
PairSet extract_sub_pairs(std::span<const SubstituteVector> vectors, const Vocabulary& words,
                          std::size_t cap_per_type, std::uint64_t seed);

}  // namespace ctxemb
