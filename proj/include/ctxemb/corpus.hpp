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

#include <compare>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ctxemb/rng.hpp"

namespace ctxemb {

using WordId = std::uint32_t;

/// One sentence of lowercased, whitespace-free tokens.
struct TokenizedSentence {
  std::vector<std::string> tokens;

  friend bool operator==(const TokenizedSentence&, const TokenizedSentence&) = default;
  friend auto operator<=>(const TokenizedSentence&, const TokenizedSentence&) = default;
};

/// A dependency-parsed token. `head` is 1-based into the sentence, 0 for root.
struct DepToken {
  std::string form;
  int head = 0;
  std::string deprel;
  // Set on preposition tokens folded into a prep_<form> label; such tokens
  // contribute no dependency contexts.
  bool collapsed = false;

  friend bool operator==(const DepToken&, const DepToken&) = default;
};

struct ParsedSentence {
  std::vector<DepToken> tokens;

  friend bool operator==(const ParsedSentence&, const ParsedSentence&) = default;
};

/// Returns a reason when the head structure is invalid, nullopt when well formed.
std::optional<std::string> validate(const ParsedSentence& sentence);

TokenizedSentence to_tokenized(const ParsedSentence& sentence);

/// Dense word <-> id map with counts. Ids are ordered by descending count,
/// ties broken lexicographically. Immutable once built.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Keeps entries with count >= min_count. Throws if min_count == 0.
  static Vocabulary from_counts(const std::unordered_map<std::string, std::uint64_t>& counts,
                                std::uint64_t total_tokens, std::uint64_t min_count);
  /// Keeps the given order as the id order. Words must be distinct.
  static Vocabulary from_entries(std::vector<std::string> words, std::vector<std::uint64_t> counts,
                                 std::uint64_t total_tokens, std::uint64_t min_count);

  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

  const std::string& word(WordId id) const { return words_.at(id); }
  std::uint64_t count(WordId id) const { return counts_.at(id); }
  std::optional<WordId> find(const std::string& word) const;
  bool contains(const std::string& word) const { return index_.count(word) != 0; }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total_tokens() const { return total_tokens_; }
  std::uint64_t min_count() const { return min_count_; }

  /// "word<TAB>count" per line, in id order.
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  /// total_tokens of a loaded vocabulary is the sum of its counts.
  static Vocabulary read(std::istream& in, const std::string& name);
  static Vocabulary load(const std::filesystem::path& path);

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, WordId> index_;
  std::uint64_t total_tokens_ = 0;
  std::uint64_t min_count_ = 1;
};

/// Counts every token; throws on an empty corpus or min_count == 0.
Vocabulary build_vocab(std::span<const TokenizedSentence> corpus, std::uint64_t min_count);

struct TokenizedCorpus {
  std::vector<TokenizedSentence> sentences;
  std::size_t skipped_lines = 0;
};

TokenizedCorpus read_tokenized(std::istream& in);
TokenizedCorpus load_tokenized(const std::filesystem::path& path);
void write_tokenized(std::ostream& out, std::span<const TokenizedSentence> corpus);

struct ParsedCorpus {
  std::vector<ParsedSentence> sentences;
  std::size_t rejected = 0;
  std::vector<std::string> diagnostics;
};

/// Accepts full 10-column CoNLL-U or a compact 4-column ID/FORM/HEAD/DEPREL
/// layout. Multiword-token and empty-node lines are ignored; sentences with
/// bad heads are rejected with a diagnostic and the stream continues.
ParsedCorpus read_conllu(std::istream& in, const std::string& name = "<stream>");
ParsedCorpus load_conllu(const std::filesystem::path& path);
void write_conllu(std::ostream& out, std::span<const ParsedSentence> corpus);

/// Fisher-Yates permutation, deterministic given seed.
template <typename Sentence>
std::vector<Sentence> shuffle_sentences(std::vector<Sentence> corpus, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = corpus.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(corpus[i - 1], corpus[j]);
  }
  return corpus;
}

}  // namespace ctxemb
