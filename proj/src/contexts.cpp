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

#include "ctxemb/contexts.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "ctxemb/io.hpp"

namespace ctxemb {

std::vector<WordId> to_ids(const TokenizedSentence& sentence, const Vocabulary& vocab) {
  std::vector<WordId> ids;
  ids.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) {
    if (auto id = vocab.find(tok)) ids.push_back(*id);
  }
  return ids;
}

std::vector<WordId> subsample(std::span<const WordId> ids, const Vocabulary& vocab,
                              double threshold, Rng& rng) {
  if (threshold <= 0) return {ids.begin(), ids.end()};
  const double t = threshold * static_cast<double>(vocab.total_tokens());
  std::vector<WordId> kept;
  kept.reserve(ids.size());
  for (auto id : ids) {
    const double f = static_cast<double>(vocab.count(id));
    const double keep = (std::sqrt(f / t) + 1.0) * t / f;
    if (keep >= 1.0 || rng.uniform() < keep) kept.push_back(id);
  }
  return kept;
}

void window_pairs(std::span<const WordId> ids, int window, bool dynamic, Rng& rng,
                  std::vector<WeightedPair>& out) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t b =
        dynamic ? 1 + static_cast<std::ptrdiff_t>(rng.below(static_cast<std::uint64_t>(window)))
                : window;
    const auto lo = std::max<std::ptrdiff_t>(0, i - b);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + b);
    for (auto j = lo; j <= hi; ++j) {
      if (j != i) out.push_back({ids[i], ids[j], 1.0});
    }
  }
}

std::vector<WeightedPair> window_pairs(std::span<const WordId> ids, int window, bool dynamic,
                                       Rng& rng) {
  std::vector<WeightedPair> out;
  window_pairs(ids, window, dynamic, rng, out);
  return out;
}

namespace {

bool is_nominal_modifier(const std::string& rel) {
  if (rel == "nmod:poss") return false;
  return rel == "nmod" || rel == "obl" || rel.rfind("nmod:", 0) == 0 || rel.rfind("obl:", 0) == 0;
}

}  // namespace

ParsedSentence collapse_prepositions(ParsedSentence sentence) {
  const ParsedSentence orig = sentence;
  const int n = static_cast<int>(orig.tokens.size());
  auto& toks = sentence.tokens;

  // Stanford: prep + pobj.
  for (int p = 1; p <= n; ++p) {
    const auto& prep = orig.tokens[p - 1];
    if (prep.deprel != "prep" || prep.head == 0) continue;
    bool has_object = false;
    for (int c = 1; c <= n; ++c) {
      if (orig.tokens[c - 1].head == p && orig.tokens[c - 1].deprel == "pobj") {
        toks[c - 1].head = prep.head;
        toks[c - 1].deprel = "prep_" + prep.form;
        has_object = true;
      }
    }
    if (has_object) toks[p - 1].collapsed = true;
  }

  // UD: case marker under an nmod/obl dependent.
  for (int m = 1; m <= n; ++m) {
    const auto& noun = orig.tokens[m - 1];
    if (!is_nominal_modifier(noun.deprel)) continue;
    int rightmost = 0;
    for (int c = 1; c <= n; ++c) {
      if (orig.tokens[c - 1].head == m && orig.tokens[c - 1].deprel == "case") {
        toks[c - 1].collapsed = true;
        rightmost = c;
      }
    }
    if (rightmost) toks[m - 1].deprel = "prep_" + orig.tokens[rightmost - 1].form;
  }
  return sentence;
}

std::string dep_context(std::string_view word, std::string_view relation, bool inverse) {
  std::string out;
  out.reserve(word.size() + relation.size() + 1 + (inverse ? kInverseMarker.size() : 0));
  out.append(word);
  out.push_back('/');
  out.append(relation);
  if (inverse) out.append(kInverseMarker);
  return out;
}

namespace {

// Calls fn(head_index, modifier_index) for each usable edge (0-based indices).
template <typename Fn>
void for_each_edge(const ParsedSentence& sentence, const Vocabulary& words, DepPairStats& stats,
                   Fn&& fn) {
  const auto& toks = sentence.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto& mod = toks[i];
    if (mod.head <= 0) continue;
    const auto& head = toks[mod.head - 1];
    if (mod.collapsed || head.collapsed) continue;
    ++stats.edges;
    // A '/' inside a form would make the composite context ambiguous.
    if (!words.contains(mod.form) || !words.contains(head.form) ||
        mod.form.find('/') != std::string::npos || head.form.find('/') != std::string::npos) {
      ++stats.oov_edges;
      continue;
    }
    fn(static_cast<std::size_t>(mod.head - 1), i);
  }
}

}  // namespace

ContextVocabulary build_dep_context_vocab(std::span<const ParsedSentence> collapsed,
                                          const Vocabulary& words, std::uint64_t min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  DepPairStats stats;
  for (const auto& sentence : collapsed) {
    const auto& toks = sentence.tokens;
    for_each_edge(sentence, words, stats, [&](std::size_t h, std::size_t m) {
      ++counts[dep_context(toks[m].form, toks[m].deprel, false)];
      ++counts[dep_context(toks[h].form, toks[m].deprel, true)];
      total += 2;
    });
  }
  return Vocabulary::from_counts(counts, total, min_count);
}

void dep_pairs(const ParsedSentence& collapsed, const Vocabulary& words,
               const ContextVocabulary& contexts, std::vector<WeightedPair>& out,
               DepPairStats& stats) {
  const auto& toks = collapsed.tokens;
  for_each_edge(collapsed, words, stats, [&](std::size_t h, std::size_t m) {
    const WordId head_id = *words.find(toks[h].form);
    const WordId mod_id = *words.find(toks[m].form);
    if (auto c = contexts.find(dep_context(toks[m].form, toks[m].deprel, false))) {
      out.push_back({head_id, *c, 1.0});
    } else {
      ++stats.rare_contexts;
    }
    if (auto c = contexts.find(dep_context(toks[h].form, toks[m].deprel, true))) {
      out.push_back({mod_id, *c, 1.0});
    } else {
      ++stats.rare_contexts;
    }
  });
}

std::vector<WeightedPair> dep_pairs(const ParsedSentence& collapsed, const Vocabulary& words,
                                    const ContextVocabulary& contexts) {
  std::vector<WeightedPair> out;
  DepPairStats stats;
  dep_pairs(collapsed, words, contexts, out, stats);
  return out;
}

std::vector<std::size_t> select_capped(std::span<const SubstituteVector> vectors,
                                       std::size_t cap_per_type, Rng& rng) {
  if (cap_per_type == 0) throw std::invalid_argument("cap_per_type must be >= 1");
  struct Reservoir {
    std::uint64_t seen = 0;
    std::vector<std::size_t> slots;
  };
  std::unordered_map<WordId, Reservoir> reservoirs;
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    auto& r = reservoirs[vectors[idx].target];
    ++r.seen;
    if (r.slots.size() < cap_per_type) {
      r.slots.push_back(idx);
    } else {
      const auto j = rng.below(r.seen);
      if (j < cap_per_type) r.slots[j] = idx;
    }
  }
  std::vector<std::size_t> selected;
  for (const auto& [target, r] : reservoirs) selected.insert(selected.end(), r.slots.begin(), r.slots.end());
  std::sort(selected.begin(), selected.end());
  return selected;
}

std::vector<WeightedPair> sub_pairs(std::span<const SubstituteVector> vectors,
                                    std::size_t cap_per_type, Rng& rng) {
  for (const auto& v : vectors) {
    double sum = 0.0;
    bool ok = !v.entries.empty();
    for (const auto& [s, p] : v.entries) {
      ok = ok && std::isfinite(p) && p >= 0.0;
      sum += p;
    }
    if (!ok || std::abs(sum - 1.0) > 1e-6) {
      throw std::invalid_argument("substitute vector at sentence " + std::to_string(v.sentence) +
                                  " position " + std::to_string(v.position) +
                                  " is not normalized (sum " + format_double(sum) + ")");
    }
  }
  std::vector<WeightedPair> out;
  for (auto idx : select_capped(vectors, cap_per_type, rng)) {
    const auto& v = vectors[idx];
    for (const auto& [s, p] : v.entries) {
      if (p > 0.0) out.push_back({v.target, s, p});
    }
  }
  return out;
}

void write_pairs(std::ostream& out, std::span<const WeightedPair> pairs, const Vocabulary& words,
                 const ContextVocabulary& contexts) {
  for (const auto& p : pairs) {
    out << words.word(p.target) << '\t' << contexts.word(p.context);
    if (p.weight != 1.0) out << '\t' << format_double(p.weight);
    out << '\n';
  }
}

std::vector<WeightedPair> read_pairs(std::istream& in, const std::string& name,
                                     const Vocabulary& words, const ContextVocabulary& contexts) {
  std::vector<WeightedPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 2 && fields.size() != 3) {
      throw FormatError(name, lineno, "expected target<TAB>context[<TAB>weight]");
    }
    WeightedPair p;
    const auto t = words.find(std::string(fields[0]));
    const auto c = contexts.find(std::string(fields[1]));
    if (!t) throw FormatError(name, lineno, "unknown target '" + std::string(fields[0]) + "'");
    if (!c) throw FormatError(name, lineno, "unknown context '" + std::string(fields[1]) + "'");
    p.target = *t;
    p.context = *c;
    if (fields.size() == 3) {
      try {
        p.weight = parse_double(fields[2]);
      } catch (const std::invalid_argument& e) {
        throw FormatError(name, lineno, e.what());
      }
      if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
        throw FormatError(name, lineno, "weight must be positive and finite");
      }
    }
    pairs.push_back(p);
  }
  return pairs;
}

}  // namespace ctxemb
