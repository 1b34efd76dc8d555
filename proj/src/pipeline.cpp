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

#include "ctxemb/pipeline.hpp"

namespace ctxemb {

PairSet extract_window_pairs(std::span<const TokenizedSentence> corpus, const Vocabulary& words,
                             const WindowOptions& options) {
  PairSet out;
  out.contexts = words;
  Rng rng(options.seed);
  for (const auto& sentence : corpus) {
    auto ids = to_ids(sentence, words);
    if (options.subsample > 0) ids = subsample(ids, words, options.subsample, rng);
    window_pairs(ids, options.window, options.dynamic, rng, out.pairs);
  }
  return out;
}

PairSet extract_dep_pairs(std::span<const ParsedSentence> corpus, const Vocabulary& words,
                          std::uint64_t ctx_min_count) {
  std::vector<ParsedSentence> collapsed;
  collapsed.reserve(corpus.size());
  for (const auto& s : corpus) collapsed.push_back(collapse_prepositions(s));
  PairSet out;
  out.contexts = build_dep_context_vocab(collapsed, words, ctx_min_count);
  DepPairStats stats;
  for (const auto& s : collapsed) dep_pairs(s, words, out.contexts, out.pairs, stats);
  out.skipped = stats.oov_edges + stats.rare_contexts;
  return out;
}

PairSet extract_sub_pairs(std::span<const SubstituteVector> vectors, const Vocabulary& words,
                          std::size_t cap_per_type, std::uint64_t seed) {
  PairSet out;
  out.contexts = words;
  Rng rng(seed);
  out.pairs = sub_pairs(vectors, cap_per_type, rng);
  return out;
}

}  // namespace ctxemb
