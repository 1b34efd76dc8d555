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

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ctxemb/io.hpp"
#include "ctxemb/lm.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ctxemb;

namespace {

std::vector<TokenizedSentence> repeat(const std::string& line, int n) {
  std::istringstream in(line);
  TokenizedSentence s{{}};
  for (std::string w; in >> w;) s.tokens.push_back(w);
  return std::vector<TokenizedSentence>(n, s);
}

std::vector<WordId> predictable(const NGramLM& lm) {
  std::vector<WordId> out;
  for (WordId w = 0; w < lm.vocabulary().size(); ++w) out.push_back(w);
  out.push_back(lm.unk());
  out.push_back(lm.eos());
  return out;
}

std::vector<WordId> random_history(const NGramLM& lm, std::size_t len, Rng& rng) {
  std::vector<WordId> h;
  // begin markers only ever appear as a prefix
  const auto bos = rng.below(len + 1);
  for (std::size_t i = 0; i < len; ++i) {
    if (i < bos) {
      h.push_back(lm.bos());
    } else {
      const auto r = rng.below(lm.vocabulary().size() + 1);
      h.push_back(r == lm.vocabulary().size() ? lm.unk() : static_cast<WordId>(r));
    }
  }
  return h;
}

}  // namespace

TEST_CASE("bigram KN value on a closed-form corpus") {
  const auto corpus = repeat("a b", 10);
  const auto vocab = build_vocab(corpus, 1);
  const auto lm = NGramLM::train(corpus, vocab, 2, DiscountSpec::fixed(0.75));
  // continuation counts a:1 b:1 </s>:1 over four outcomes (a b <unk> </s>)
  // P1(b) = (1 - .75)/3 + .75 * 3/3 / 4 = 13/48
  // P(b|a) = (10 - .75)/10 + .75 * 1/10 * 13/48 = 121/128
  const WordId a = *vocab.find("a"), b = *vocab.find("b");
  const std::vector<WordId> h{a};
  CHECK(std::abs(lm.prob(b, h) - 121.0 / 128.0) < 1e-12);
  CHECK(std::abs(lm.prob(b, {}) - 13.0 / 48.0) < 1e-12);
}

TEST_CASE("unigram model uses raw counts at its only level") {
  const auto corpus = repeat("a a a b", 1);
  const auto vocab = build_vocab(corpus, 1);
  const auto lm = NGramLM::train(corpus, vocab, 1, DiscountSpec::fixed(0.75));
  // counts a:3 b:1 </s>:1, total 5, three types, four outcomes
  const double d = 0.75, uniform = d * 3 / 5 / 4;
  CHECK(std::abs(lm.prob(*vocab.find("a"), {}) - ((3 - d) / 5 + uniform)) < 1e-12);
  CHECK(std::abs(lm.prob(*vocab.find("b"), {}) - ((1 - d) / 5 + uniform)) < 1e-12);
  CHECK(std::abs(lm.prob(lm.eos(), {}) - ((1 - d) / 5 + uniform)) < 1e-12);
  CHECK(std::abs(lm.prob(lm.unk(), {}) - uniform) < 1e-12);
  CHECK(lm.prob(lm.bos(), {}) == 0.0);
}

TEST_CASE("KN matches the symbolic recursion oracle") {
  std::istringstream in("the cat sat on the mat\nthe dog sat\na cat saw the dog on a mat\nthe end\n");
  const auto corpus = read_tokenized(in).sentences;  // 20 tokens
  std::set<std::string> vocab_set;
  for (const auto& s : corpus) vocab_set.insert(s.tokens.begin(), s.tokens.end());
  vocab_set.erase("end");  // one OOV type
  std::vector<std::string> words(vocab_set.begin(), vocab_set.end());
  std::vector<std::uint64_t> counts(words.size(), 1);
  const auto vocab = Vocabulary::from_entries(words, counts, 20, 1);
  std::vector<std::vector<std::string>> raw;
  for (const auto& s : corpus) raw.push_back(s.tokens);

  for (int order = 1; order <= 4; ++order) {
    for (double d : {0.5, 0.75, 1.0}) {
      const auto lm = NGramLM::train(corpus, vocab, order, DiscountSpec::fixed(d));
      const oracle::KneserNey kn(raw, vocab_set, order, d);
      Rng rng(static_cast<std::uint64_t>(order * 10 + d * 4));
      for (int trial = 0; trial < 30; ++trial) {
        const auto h = random_history(lm, static_cast<std::size_t>(order - 1), rng);
        std::vector<std::string> hs;
        for (auto id : h) hs.push_back(lm.token_string(id));
        for (const auto& w : kn.outcomes()) {
          CAPTURE(order);
          CAPTURE(w);
          const double got = std::exp(lm.logprob(w, hs));
          CHECK(std::abs(got - kn.prob(w, hs)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("KN distributions normalize for every history length") {
  const auto corpus = fixtures::markov_corpus(300, 40, 5);
  const auto vocab = build_vocab(corpus, 2);
  for (int order = 1; order <= 4; ++order) {
    for (const auto& spec : {DiscountSpec::fixed(0.75), DiscountSpec::estimate()}) {
      const auto lm = NGramLM::train(corpus, vocab, order, spec);
      Rng rng(order);
      for (std::size_t len = 0; len < static_cast<std::size_t>(order); ++len) {
        for (int t = 0; t < 100; ++t) {
          const auto h = random_history(lm, len, rng);
          double sum = 0;
          for (auto w : predictable(lm)) {
            const double p = lm.prob(w, h);
            CHECK(p > 0.0);
            CHECK(p <= 1.0);
            sum += p;
          }
          CHECK(std::abs(sum - 1.0) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("estimated discounts follow the count-of-counts formula") {
  const auto corpus = fixtures::markov_corpus(200, 30, 6);
  const auto vocab = build_vocab(corpus, 1);
  const auto lm = NGramLM::train(corpus, vocab, 3, DiscountSpec::estimate());
  // top level: raw trigram counts
  std::map<std::vector<WordId>, int> tri;
  for (const auto& s : corpus) {
    std::vector<WordId> p{lm.bos(), lm.bos()};
    for (auto id : lm.encode(s)) p.push_back(id);
    p.push_back(lm.eos());
    for (std::size_t i = 2; i < p.size(); ++i) ++tri[{p[i - 2], p[i - 1], p[i]}];
  }
  double n1 = 0, n2 = 0;
  for (const auto& [g, c] : tri) {
    n1 += c == 1;
    n2 += c == 2;
  }
  CHECK(std::abs(lm.discounts()[2] - n1 / (n1 + 2 * n2)) < 1e-15);
  for (double d : lm.discounts()) {
    CHECK(d > 0);
    CHECK(d <= 1);
  }
}

TEST_CASE("bad orders and discounts are rejected") {
  const auto corpus = repeat("a b", 2);
  const auto vocab = build_vocab(corpus, 1);
  CHECK_THROWS(NGramLM::train(corpus, vocab, 0));
  CHECK_THROWS(NGramLM::train(corpus, vocab, 7));
  CHECK_THROWS(NGramLM::train(corpus, vocab, 2, DiscountSpec::fixed(0.0)));
  CHECK_THROWS(NGramLM::train(corpus, vocab, 2, DiscountSpec::fixed(1.5)));
  CHECK_THROWS(NGramLM::train(std::vector<TokenizedSentence>{}, vocab, 2));
  const auto lm = NGramLM::train(corpus, vocab, 2);
  const std::vector<WordId> too_long{0, 1};
  CHECK_THROWS(lm.logprob(0, too_long));
}

TEST_CASE("logprob is non-positive and maps unknown words to <unk>") {
  const auto corpus = fixtures::markov_corpus(100, 20, 2);
  const auto vocab = build_vocab(corpus, 1);
  const auto lm = NGramLM::train(corpus, vocab, 3);
  const std::vector<std::string> h{"w1", "w2"};
  for (const auto& w : vocab.words()) CHECK(lm.logprob(w, h) <= 0.0);
  CHECK(lm.logprob("never-seen", h) == lm.logprob("<unk>", h));
}

TEST_CASE("adding a sentence again never lowers its top-order probabilities") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto corpus = fixtures::markov_corpus(40, 12, seed, 6);
    const auto vocab = build_vocab(corpus, 1);
    for (int order : {2, 3}) {
      Rng rng(seed);
      const auto pick = corpus[rng.below(corpus.size())];
      const auto before = NGramLM::train(corpus, vocab, order);
      auto more = corpus;
      for (int r = 0; r < 3; ++r) more.push_back(pick);
      const auto after = NGramLM::train(more, vocab, order);
      auto ids = before.encode(pick);
      std::vector<WordId> padded(order - 1, before.bos());
      padded.insert(padded.end(), ids.begin(), ids.end());
      padded.push_back(before.eos());
      for (std::size_t i = order - 1; i < padded.size(); ++i) {
        const std::vector<WordId> h(padded.begin() + (i + 1 - order), padded.begin() + i);
        CHECK(after.prob(padded[i], h) >= before.prob(padded[i], h) - 1e-15);
      }
    }
  }
}

TEST_CASE("model file round trip") {
  const auto corpus = fixtures::markov_corpus(100, 25, 3);
  const auto vocab = build_vocab(corpus, 2);
  const auto lm = NGramLM::train(corpus, vocab, 4, DiscountSpec::estimate());
  std::stringstream s;
  lm.write(s);
  const auto back = NGramLM::read(s, "mem");
  CHECK(back.order() == 4);
  CHECK(back.discounts() == lm.discounts());
  CHECK(back.vocabulary().words() == vocab.words());
  Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const auto h = random_history(lm, 3, rng);
    const auto w = static_cast<WordId>(rng.below(vocab.size()));
    CHECK(back.prob(w, h) == lm.prob(w, h));
  }
  std::istringstream junk("not a model");
  CHECK_THROWS_AS(NGramLM::read(junk, "junk"), FormatError);
}

TEST_CASE("score_slot boundary cases") {
  const auto corpus = fixtures::markov_corpus(100, 20, 4);
  const auto vocab = build_vocab(corpus, 1);
  const auto uni = NGramLM::train(corpus, vocab, 1);
  const std::vector<WordId> sent{0, 1, 2, 3};
  for (std::size_t pos = 0; pos < sent.size(); ++pos) {
    CHECK(score_slot(uni, sent, pos, 5) == std::log(uni.prob(5, {})));
  }
  const auto lm4 = NGramLM::train(corpus, vocab, 4);
  const std::vector<WordId> single{7};
  const std::vector<WordId> begin(3, lm4.bos());
  CHECK(score_slot(lm4, single, 0, 3) == std::log(lm4.prob(3, begin)));
}

TEST_CASE("score_slot equals the slot-dependent part of the sentence score") {
  std::istringstream in("the cat sat on the mat\nthe dog sat\na cat saw the dog on a mat\n");
  const auto corpus = read_tokenized(in).sentences;
  const auto vocab = build_vocab(corpus, 1);
  std::set<std::string> vs(vocab.words().begin(), vocab.words().end());
  std::vector<std::vector<std::string>> raw;
  for (const auto& s : corpus) raw.push_back(s.tokens);
  for (int order = 2; order <= 4; ++order) {
    const auto lm = NGramLM::train(corpus, vocab, order);
    const oracle::KneserNey kn(raw, vs, order, 0.75);
    const auto sent = corpus[2].tokens;
    for (std::size_t pos = 0; pos < sent.size(); ++pos) {
      for (const auto& cand : vocab.words()) {
        auto s = sent;
        s[pos] = cand;
        // log p of every token, minus the terms whose window misses the slot
        double full = 0, unaffected = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          std::vector<std::string> h;
          for (int j = order - 1; j >= 1; --j) {
            const long at = static_cast<long>(i) - j;
            h.push_back(at < 0 ? "<s>" : s[at]);
          }
          const double lp = std::log(kn.prob(s[i], h));
          full += lp;
          if (i < pos || i >= pos + order) unaffected += lp;
        }
        const auto ids = lm.encode(TokenizedSentence{sent});
        CHECK(std::abs(score_slot(lm, ids, pos, *vocab.find(cand)) - (full - unaffected)) < 1e-9);
      }
    }
  }
}

TEST_CASE("substitutes agree with brute-force enumeration") {
  const auto corpus = fixtures::markov_corpus(400, 60, 9);
  const auto vocab = build_vocab(corpus, 1);
  const auto lm = NGramLM::train(corpus, vocab, 4);
  Rng rng(2);
  for (int t = 0; t < 40; ++t) {
    const auto ids = lm.encode(corpus[rng.below(corpus.size())]);
    const auto pos = rng.below(ids.size());
    for (std::size_t k : {1ul, 10ul, 11ul}) {
      const auto got = substitutes(lm, ids, pos, k);
      const auto want = oracle::brute_force_substitutes(lm, ids, pos, k);
      REQUIRE(got.entries.size() == want.size());
      for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(got.entries[i].first == want[i].first);
        CHECK(std::abs(got.entries[i].second - want[i].second) < 1e-9);
      }
    }
    // prefix property
    const auto k10 = substitutes(lm, ids, pos, 10), k11 = substitutes(lm, ids, pos, 11);
    for (std::size_t i = 0; i < 10; ++i) CHECK(k10.entries[i].first == k11.entries[i].first);
  }
}

TEST_CASE("substitutes: normalization, limits and a forced successor") {
  const auto corpus = repeat("x a b y", 20);
  auto more = repeat("x c y", 20);
  std::vector<TokenizedSentence> all = corpus;
  all.insert(all.end(), more.begin(), more.end());
  const auto vocab = build_vocab(all, 1);
  const auto lm = NGramLM::train(all, vocab, 2);
  const auto ids = lm.encode(corpus[0]);
  const auto v = substitutes(lm, ids, 2, vocab.size() + 5);
  CHECK(v.entries.size() == vocab.size());
  double sum = 0;
  for (const auto& e : v.entries) sum += e.second;
  CHECK(std::abs(sum - 1.0) < 1e-6);
  CHECK(v.entries[0].first == *vocab.find("b"));
  CHECK_THROWS(substitutes(lm, ids, 2, 0));
  for (const auto& e : v.entries) CHECK(e.first < vocab.size());
}

TEST_CASE("substitute generation is worker-count independent and round trips") {
  const auto corpus = fixtures::markov_corpus(60, 30, 12);
  const auto vocab = build_vocab(corpus, 2);
  const auto lm = NGramLM::train(corpus, vocab, 3);
  const auto one = generate_substitutes(lm, corpus, 5, 1);
  const auto three = generate_substitutes(lm, corpus, 5, 3);
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].sentence == three[i].sentence);
    CHECK(one[i].position == three[i].position);
    CHECK(one[i].entries == three[i].entries);
    double sum = 0;
    for (const auto& e : one[i].entries) sum += e.second;
    CHECK(std::abs(sum - 1.0) < 1e-6);
  }
  std::stringstream s;
  write_substitutes(s, one, vocab);
  const auto back = read_substitutes(s, "mem", vocab, corpus);
  REQUIRE(back.size() == one.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(back[i].target == one[i].target);
    CHECK(back[i].entries == one[i].entries);
  }
}
