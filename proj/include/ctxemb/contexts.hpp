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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ctxemb/corpus.hpp"
#include "ctxemb/rng.hpp"

namespace ctxemb {

/// A target/context co-occurrence with its weight. Window and dependency
/// extractors always emit weight 1; substitute pairs carry the substitute's
/// normalized probability.
struct WeightedPair {
  WordId target = 0;
  WordId context = 0;
  double weight = 1.0;

  friend bool operator==(const WeightedPair&, const WeightedPair&) = default;
  friend auto operator<=>(const WeightedPair&, const WeightedPair&) = default;
};

/// Context strings live in their own id space, with the same layout and
/// ordering rules as the word vocabulary.
using ContextVocabulary = Vocabulary;

/// Top-k substitutes for one token occurrence. `target` is the word id of the
/// token in the slot; entries are (substitute word id, probability).
struct SubstituteVector {
  std::size_t sentence = 0;
  std::size_t position = 0;
  WordId target = 0;
  std::vector<std::pair<WordId, double>> entries;
};

/// Maps tokens to ids, deleting out-of-vocabulary tokens so windows span them.
std::vector<WordId> to_ids(const TokenizedSentence& sentence, const Vocabulary& vocab);

/// Frequent-word subsampling: a token with corpus frequency f is kept with
/// probability (sqrt(f / t) + 1) * t / f, t = threshold * total_tokens.
std::vector<WordId> subsample(std::span<const WordId> ids, const Vocabulary& vocab,
                              double threshold, Rng& rng);

/// Emits (w_i, w_j, 1) for every j != i with |i - j| <= b. With `dynamic`
/// set, b is drawn uniformly from 1..window once per position i.
void window_pairs(std::span<const WordId> ids, int window, bool dynamic, Rng& rng,
                  std::vector<WeightedPair>& out);
std::vector<WeightedPair> window_pairs(std::span<const WordId> ids, int window, bool dynamic,
                                       Rng& rng);

/// Re-attaches prepositional objects directly to the preposition's governor
/// with label prep_<form>, and marks the preposition token as collapsed.
///
/// Stanford style: p --prep--> h and n --pobj--> p become n --prep_p--> h.
/// UD style: n --nmod|obl--> h with case child p relabels n to prep_p; when n
/// has several case children the rightmost one names the label.
ParsedSentence collapse_prepositions(ParsedSentence sentence);

inline constexpr std::string_view kInverseMarker = "⁻¹";  // superscript -1

/// "word/rel" or "word/rel⁻¹".
std::string dep_context(std::string_view word, std::string_view relation, bool inverse);

struct DepPairStats {
  std::size_t edges = 0;
  std::size_t oov_edges = 0;        // an endpoint missing from the word vocabulary
  std::size_t rare_contexts = 0;    // context string below the context min_count
};

/// Counts every dependency context string of the (already collapsed) corpus
/// whose edge endpoints are both in `words`, and thresholds at min_count.
ContextVocabulary build_dep_context_vocab(std::span<const ParsedSentence> collapsed,
                                          const Vocabulary& words, std::uint64_t min_count);

/// For each edge h --r--> m with both words in vocabulary, emits (h, "m/r")
/// and (m, "h/r⁻¹"). Root edges and collapsed prepositions emit nothing.
void dep_pairs(const ParsedSentence& collapsed, const Vocabulary& words,
               const ContextVocabulary& contexts, std::vector<WeightedPair>& out,
               DepPairStats& stats);
std::vector<WeightedPair> dep_pairs(const ParsedSentence& collapsed, const Vocabulary& words,
                                    const ContextVocabulary& contexts);

/// Indices (ascending) of the vectors kept when at most `cap_per_type` vectors
/// are allowed per target type, chosen by per-type reservoir sampling.
std::vector<std::size_t> select_capped(std::span<const SubstituteVector> vectors,
                                       std::size_t cap_per_type, Rng& rng);

/// Converts selected substitute vectors into weighted pairs (t, s_i, p_i).
/// Throws std::invalid_argument if a vector's probabilities do not sum to 1
/// within 1e-6.
std::vector<WeightedPair> sub_pairs(std::span<const SubstituteVector> vectors,
                                    std::size_t cap_per_type, Rng& rng);

/// Pair file: "target<TAB>context<TAB>weight", weight omitted when exactly 1.
void write_pairs(std::ostream& out, std::span<const WeightedPair> pairs, const Vocabulary& words,
                 const ContextVocabulary& contexts);
std::vector<WeightedPair> read_pairs(std::istream& in, const std::string& name,
                                     const Vocabulary& words, const ContextVocabulary& contexts);

}  // namespace ctxemb
