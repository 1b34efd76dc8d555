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

// Hand-built inputs shared by the unit and acceptance tests.

#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "ctxemb/contexts.hpp"
#include "ctxemb/corpus.hpp"
#include "ctxemb/embedding.hpp"
#include "ctxemb/eval.hpp"
#include "ctxemb/rng.hpp"

namespace fixtures {

struct DepCase {
  std::string name;
  ctxemb::ParsedSentence parse;
  std::vector<std::pair<std::string, std::string>> expected;  // (target, context)
};

inline std::vector<DepCase> dep_cases() {
  const std::string inv = "⁻¹";
  return {
      {"dog barks",
       {{{"dog", 2, "nsubj"}, {"barks", 0, "root"}}},
       {{"barks", "dog/nsubj"}, {"dog", "barks/nsubj" + inv}}},
      {"the cat chased a mouse",
       {{{"the", 2, "det"}, {"cat", 3, "nsubj"}, {"chased", 0, "root"}, {"a", 5, "det"}, {"mouse", 3, "obj"}}},
       {{"cat", "the/det"},
        {"the", "cat/det" + inv},
        {"chased", "cat/nsubj"},
        {"cat", "chased/nsubj" + inv},
        {"mouse", "a/det"},
        {"a", "mouse/det" + inv},
        {"chased", "mouse/obj"},
        {"mouse", "chased/obj" + inv}}},
      {"battle of midway",
       {{{"battle", 0, "root"}, {"of", 3, "case"}, {"midway", 1, "nmod"}}},
       {{"battle", "midway/prep_of"}, {"midway", "battle/prep_of" + inv}}},
      {"he looked with care",
       {{{"he", 2, "nsubj"}, {"looked", 0, "root"}, {"with", 2, "prep"}, {"care", 3, "pobj"}}},
       {{"looked", "he/nsubj"},
        {"he", "looked/nsubj" + inv},
        {"looked", "care/prep_with"},
        {"care", "looked/prep_with" + inv}}},
      {"jumped out of the box",
       {{{"jumped", 0, "root"}, {"out", 5, "case"}, {"of", 5, "case"}, {"the", 5, "det"}, {"box", 1, "obl"}}},
       {{"box", "the/det"},
        {"the", "box/det" + inv},
        {"jumped", "box/prep_of"},
        {"box", "jumped/prep_of" + inv}}},
  };
}

inline ctxemb::Vocabulary vocab_of(const std::vector<ctxemb::TokenizedSentence>& corpus) {
  return ctxemb::build_vocab(corpus, 1);
}

// Five TOEFL items over 2-d vectors; the last one is answered wrongly by
// cosine argmax, so the expected score is 4/5.
struct ToeflFixture {
  ctxemb::EmbeddingSet embeddings;
  std::vector<ctxemb::ToeflItem> items;
};

inline ToeflFixture toefl_fixture() {
  std::vector<std::pair<std::string, std::pair<double, double>>> rows = {
      {"t1", {1, 0}},   {"a1", {0.9, 0.1}}, {"b1", {0, 1}},    {"c1", {-1, 0}},   {"d1", {0, -1}},
      {"t2", {0, 1}},   {"a2", {1, 0}},     {"b2", {0.2, 1}},  {"c2", {-1, 0}},   {"d2", {0, -1}},
      {"t3", {1, 1}},   {"a3", {1, -1}},    {"b3", {-1, 1}},   {"c3", {2, 2.1}},  {"d3", {-1, -1}},
      {"t4", {1, 0}},   {"a4", {0, 1}},     {"b4", {-1, 0}},   {"c4", {0, -1}},   {"d4", {1, 0.05}},
      {"t5", {1, 0}},   {"a5", {0, 1}},     {"b5", {1, 0.1}},  {"c5", {-1, 0}},   {"d5", {0, -1}},
  };
  std::vector<std::string> words;
  ctxemb::Matrix m(rows.size(), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    words.push_back(rows[i].first);
    m(i, 0) = rows[i].second.first;
    m(i, 1) = rows[i].second.second;
  }
  ToeflFixture f{ctxemb::EmbeddingSet(words, m), {}};
  const int answers[5] = {0, 1, 2, 3, 0};
  for (int k = 1; k <= 5; ++k) {
    const auto s = std::to_string(k);
    f.items.push_back({"t" + s, {"a" + s, "b" + s, "c" + s, "d" + s}, answers[k - 1]});
  }
  return f;
}

// Sentences from a sparse first-order chain over w0..w{vocab-1}, so that
// n-grams repeat and every level of a model has real mass.
inline std::vector<ctxemb::TokenizedSentence> markov_corpus(std::size_t sentences, std::size_t vocab,
                                                            std::uint64_t seed, std::size_t max_len = 12) {
  ctxemb::Rng rng(seed);
  std::vector<std::vector<std::size_t>> next(vocab);
  for (auto& n : next)
    for (int j = 0; j < 4; ++j) n.push_back(rng.below(vocab));
  std::vector<ctxemb::TokenizedSentence> out(sentences);
  for (auto& s : out) {
    const auto len = 1 + rng.below(max_len);
    std::size_t w = rng.below(vocab);
    for (std::uint64_t i = 0; i < len; ++i) {
      s.tokens.push_back("w" + std::to_string(w));
      w = rng.below(8) == 0 ? rng.below(vocab) : next[w][rng.below(4)];
    }
  }
  return out;
}

// Two disjoint topic vocabularies t0_* and t1_*; no sentence mixes topics.
inline std::vector<ctxemb::TokenizedSentence> two_topic_corpus(std::size_t sentences, std::size_t per_topic,
                                                               std::uint64_t seed) {
  ctxemb::Rng rng(seed);
  std::vector<ctxemb::TokenizedSentence> out(sentences);
  for (std::size_t i = 0; i < sentences; ++i) {
    const std::string topic = i % 2 ? "t1_" : "t0_";
    const auto len = 6 + rng.below(7);
    for (std::uint64_t j = 0; j < len; ++j) out[i].tokens.push_back(topic + std::to_string(rng.below(per_topic)));
  }
  return out;
}

// Mean cosine within topics minus mean cosine across topics.
inline double cluster_margin(const ctxemb::EmbeddingSet& e) {
  double intra = 0, inter = 0;
  std::size_t ni = 0, nx = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const double c = ctxemb::cosine(ctxemb::Vector(e.row(i)), ctxemb::Vector(e.row(j)));
      if (e.words()[i].substr(0, 3) == e.words()[j].substr(0, 3)) {
        intra += c;
        ++ni;
      } else {
        inter += c;
        ++nx;
      }
    }
  }
  return intra / static_cast<double>(ni) - inter / static_cast<double>(nx);
}

// 2-d points labeled by the side of x + 2y = 0.3, with a margin.
struct Separable {
  ctxemb::Matrix x;
  std::vector<int> y;
};

inline Separable separable_set(std::size_t n, std::uint64_t seed) {
  ctxemb::Rng rng(seed);
  Separable s{ctxemb::Matrix(static_cast<Eigen::Index>(n), 2), {}};
  for (std::size_t i = 0; i < n;) {
    const double a = rng.uniform() * 4 - 2, b = rng.uniform() * 4 - 2;
    const double side = a + 2 * b - 0.3;
    if (std::abs(side) < 0.2) continue;
    s.x(static_cast<Eigen::Index>(i), 0) = a;
    s.x(static_cast<Eigen::Index>(i), 1) = b;
    s.y.push_back(side > 0 ? 1 : 0);
    ++i;
  }
  return s;
}

// Mean log loss plus l2 |w|^2, written out with scalar loops.
inline double logistic_objective_oracle(const std::vector<double>& w, double bias, const ctxemb::Matrix& x,
                                        const std::vector<int>& y, double l2) {
  double total = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double z = bias;
    for (Eigen::Index j = 0; j < x.cols(); ++j) z += w[j] * x(i, j);
    const double p = 1 / (1 + std::exp(-z));
    total -= y[i] ? std::log(p) : std::log(1 - p);
  }
  double norm = 0;
  for (double v : w) norm += v * v;
  return total / static_cast<double>(x.rows()) + l2 * norm;
}

}  // namespace fixtures
