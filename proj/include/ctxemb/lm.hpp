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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxemb/contexts.hpp"
#include "ctxemb/corpus.hpp"

namespace ctxemb {

/// Absolute discount per n-gram level: a fixed value, or count-of-counts
/// estimation D = n1 / (n1 + 2 n2) (falls back to 0.75 when degenerate).
struct DiscountSpec {
  std::vector<double> per_level;  // index 0 = unigram; empty means 0.75 everywhere
  bool estimated = false;

  static DiscountSpec fixed(double d) { return DiscountSpec{{d}, false}; }
  static DiscountSpec estimate() { return DiscountSpec{{}, true}; }
};

/// Interpolated Kneser-Ney n-gram model over a fixed word vocabulary.
///
/// Token ids 0..V-1 are the word vocabulary ids; V is the unknown word, V+1 the
/// begin marker and V+2 the end marker. The highest level uses raw counts,
/// lower levels use continuation counts N1+(. v), and the unigram level is
/// interpolated with a uniform distribution over every predictable token
/// (words, unknown, end marker). The begin marker is never predicted.
class NGramLM {
 public:
  static constexpr int kMaxOrder = 6;

  NGramLM() = default;

  /// Sentences are padded with order-1 begin markers and one end marker.
  /// Throws if the corpus contains no tokens at all.
  static NGramLM train(std::span<const TokenizedSentence> corpus, const Vocabulary& vocab,
                       int order, const DiscountSpec& discount = {});

  int order() const { return order_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const std::vector<double>& discounts() const { return discounts_; }

  WordId unk() const { return static_cast<WordId>(vocab_.size()); }
  WordId bos() const { return static_cast<WordId>(vocab_.size() + 1); }
  WordId eos() const { return static_cast<WordId>(vocab_.size() + 2); }
  /// Number of tokens that can be predicted: words, unknown, end marker.
  std::size_t predictable_size() const { return vocab_.size() + 2; }

  /// "<s>" and "</s>" map to the markers; out-of-vocabulary words to unk().
  WordId token_id(const std::string& word) const;
  std::string token_string(WordId id) const;
  std::vector<WordId> encode(const TokenizedSentence& sentence) const;

  /// P(w | history); only the last order-1 history ids are used, and a
  /// shorter history selects the matching lower-order distribution.
  double prob(WordId w, std::span<const WordId> history) const;
  /// Natural-log probability. Throws if history is longer than order-1.
  double logprob(WordId w, std::span<const WordId> history) const;
  double logprob(const std::string& word, std::span<const std::string> history) const;

  /// Raw (highest level) or continuation count of an n-gram, 0 if unseen.
  std::uint64_t ngram_count(std::span<const WordId> ngram) const;

  /// Sorted n-gram arrays per level behind a versioned header.
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static NGramLM read(std::istream& in, const std::string& name);
  static NGramLM load(const std::filesystem::path& path);

 private:
  struct Key {
    std::array<WordId, kMaxOrder> ids{};
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };
  struct HistoryStats {
    std::uint64_t total = 0;  // sum of counts following the history
    std::uint64_t types = 0;  // distinct followers
  };

  static Key make_key(std::span<const WordId> ids);
  void rebuild_histories();
  double prob_level(int level, const WordId* history, WordId w) const;

  int order_ = 0;
  Vocabulary vocab_;
  std::vector<double> discounts_;
  // Index = level - 1.
  std::vector<std::unordered_map<Key, std::uint64_t, KeyHash>> counts_;
  std::vector<std::unordered_map<Key, HistoryStats, KeyHash>> histories_;
};

/// Sum of log P over the n-gram windows whose probability depends on slot
/// `pos`, i.e. positions pos..min(pos+order-1, last), with the slot token
/// replaced by `candidate`. `sentence` holds NGramLM token ids.
double score_slot(const NGramLM& lm, std::span<const WordId> sentence, std::size_t pos,
                  WordId candidate);

/// The k best-scoring vocabulary words for the slot (ties by lower id),
/// probabilities renormalized over those k. Enumerates every word; the
/// unknown token and the sentence markers are never proposed. Throws if k < 1.
SubstituteVector substitutes(const NGramLM& lm, std::span<const WordId> sentence, std::size_t pos,
                             std::size_t k = 10);

/// Substitute vectors for every in-vocabulary token of the corpus, in corpus
/// order. Work is split across `workers` threads; output is identical for any
/// worker count.
std::vector<SubstituteVector> generate_substitutes(const NGramLM& lm,
                                                   std::span<const TokenizedSentence> corpus,
                                                   std::size_t k, unsigned workers = 1);

/// "sent_idx<TAB>pos<TAB>s1 p1<TAB>s2 p2 ..." per occurrence.
void write_substitutes(std::ostream& out, std::span<const SubstituteVector> vectors,
                       const Vocabulary& vocab);
/// Targets are recovered from `corpus` at (sent_idx, pos).
std::vector<SubstituteVector> read_substitutes(std::istream& in, const std::string& name,
                                               const Vocabulary& vocab,
                                               std::span<const TokenizedSentence> corpus);

}  // namespace ctxemb
