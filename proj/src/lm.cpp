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

#include "ctxemb/lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ctxemb/io.hpp"

namespace ctxemb {

namespace {

constexpr char kLmMagic[8] = {'C', 'T', 'X', 'K', 'N', 'L', 'M', '\0'};
constexpr std::uint32_t kLmVersion = 1;
constexpr double kDefaultDiscount = 0.75;

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& name) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw FormatError(name, 0, "truncated language model file");
  }
  return value;
}

}  // namespace

std::size_t NGramLM::KeyHash::operator()(const Key& k) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (auto id : k.ids) {
    h ^= id + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xbf58476d1ce4e5b9ull;
  }
  return static_cast<std::size_t>(h ^ (h >> 31));
}

NGramLM::Key NGramLM::make_key(std::span<const WordId> ids) {
  Key key;
  std::copy(ids.begin(), ids.end(), key.ids.begin());
  return key;
}

WordId NGramLM::token_id(const std::string& word) const {
  if (word == "<s>") return bos();
  if (word == "</s>") return eos();
  if (auto id = vocab_.find(word)) return *id;
  return unk();
}

std::string NGramLM::token_string(WordId id) const {
  if (id < vocab_.size()) return vocab_.word(id);
  if (id == unk()) return "<unk>";
  if (id == bos()) return "<s>";
  if (id == eos()) return "</s>";
  throw std::out_of_range("token id out of range");
}

std::vector<WordId> NGramLM::encode(const TokenizedSentence& sentence) const {
  std::vector<WordId> ids;
  ids.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) {
    auto id = vocab_.find(tok);
    ids.push_back(id ? *id : unk());
  }
  return ids;
}

NGramLM NGramLM::train(std::span<const TokenizedSentence> corpus, const Vocabulary& vocab,
                       int order, const DiscountSpec& discount) {
  if (order < 1 || order > kMaxOrder) {
    throw std::invalid_argument("order must be in 1.." + std::to_string(kMaxOrder));
  }
  NGramLM lm;
  lm.order_ = order;
  lm.vocab_ = vocab;
  lm.counts_.resize(order);

  std::size_t tokens = 0;
  std::vector<WordId> padded;
  auto& top = lm.counts_[order - 1];
  for (const auto& sentence : corpus) {
    padded.assign(order - 1, lm.bos());
    for (auto id : lm.encode(sentence)) padded.push_back(id);
    padded.push_back(lm.eos());
    tokens += sentence.tokens.size();
    for (std::size_t i = order - 1; i < padded.size(); ++i) {
      ++top[make_key({padded.data() + i + 1 - order, static_cast<std::size_t>(order)})];
    }
  }
  if (tokens == 0) throw std::invalid_argument("corpus is smaller than one full n-gram");

  // Continuation counts: distinct left extensions of each lower-order n-gram.
  for (int level = order; level >= 2; --level) {
    auto& lower = lm.counts_[level - 2];
    for (const auto& [key, count] : lm.counts_[level - 1]) {
      Key suffix;
      std::copy(key.ids.begin() + 1, key.ids.begin() + level, suffix.ids.begin());
      ++lower[suffix];
    }
  }

  lm.discounts_.assign(order, kDefaultDiscount);
  if (discount.estimated) {
    for (int level = 1; level <= order; ++level) {
      std::uint64_t n1 = 0, n2 = 0;
      for (const auto& [key, count] : lm.counts_[level - 1]) {
        n1 += count == 1;
        n2 += count == 2;
      }
      if (n1 > 0) {
        lm.discounts_[level - 1] =
            static_cast<double>(n1) / (static_cast<double>(n1) + 2.0 * static_cast<double>(n2));
      }
    }
  } else if (discount.per_level.size() == 1) {
    lm.discounts_.assign(order, discount.per_level[0]);
  } else if (!discount.per_level.empty()) {
    if (discount.per_level.size() != static_cast<std::size_t>(order)) {
      throw std::invalid_argument("expected one discount or one per level");
    }
    lm.discounts_ = discount.per_level;
  }
  for (double d : lm.discounts_) {
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("discounts must lie in (0, 1]");
  }

  lm.rebuild_histories();
  return lm;
}

void NGramLM::rebuild_histories() {
  histories_.assign(order_, {});
  for (int level = 1; level <= order_; ++level) {
    auto& hist = histories_[level - 1];
    for (const auto& [key, count] : counts_[level - 1]) {
      Key prefix;
      std::copy(key.ids.begin(), key.ids.begin() + level - 1, prefix.ids.begin());
      auto& stats = hist[prefix];
      stats.total += count;
      ++stats.types;
    }
  }
}

double NGramLM::prob_level(int level, const WordId* history, WordId w) const {
  const double d = discounts_[level - 1];
  if (level == 1) {
    const auto& stats = histories_[0].at(Key{});
    auto it = counts_[0].find(make_key({&w, 1}));
    const double c = it == counts_[0].end() ? 0.0 : static_cast<double>(it->second);
    const double total = static_cast<double>(stats.total);
    return std::max(c - d, 0.0) / total +
           d * static_cast<double>(stats.types) / total / static_cast<double>(predictable_size());
  }
  const double lower = prob_level(level - 1, history + 1, w);
  const auto hist_key = make_key({history, static_cast<std::size_t>(level - 1)});
  auto hit = histories_[level - 1].find(hist_key);
  if (hit == histories_[level - 1].end()) return lower;
  Key full = hist_key;
  full.ids[level - 1] = w;
  auto it = counts_[level - 1].find(full);
  const double c = it == counts_[level - 1].end() ? 0.0 : static_cast<double>(it->second);
  const double total = static_cast<double>(hit->second.total);
  return std::max(c - d, 0.0) / total + d * static_cast<double>(hit->second.types) / total * lower;
}

double NGramLM::prob(WordId w, std::span<const WordId> history) const {
  if (w == bos()) return 0.0;
  if (w > eos()) throw std::out_of_range("token id out of range");
  const std::size_t used = std::min<std::size_t>(history.size(), order_ - 1);
  const WordId* start = history.data() + (history.size() - used);
  return prob_level(static_cast<int>(used) + 1, start, w);
}

double NGramLM::logprob(WordId w, std::span<const WordId> history) const {
  if (history.size() > static_cast<std::size_t>(order_ - 1)) {
    throw std::invalid_argument("history longer than order - 1");
  }
  return std::log(prob(w, history));
}

double NGramLM::logprob(const std::string& word, std::span<const std::string> history) const {
  std::vector<WordId> ids;
  ids.reserve(history.size());
  for (const auto& h : history) ids.push_back(token_id(h));
  return logprob(token_id(word), ids);
}

std::uint64_t NGramLM::ngram_count(std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > static_cast<std::size_t>(order_)) return 0;
  const auto& table = counts_[ngram.size() - 1];
  auto it = table.find(make_key(ngram));
  return it == table.end() ? 0 : it->second;
}

void NGramLM::write(std::ostream& out) const {
  out.write(kLmMagic, sizeof(kLmMagic));
  put(out, kLmVersion);
  put(out, static_cast<std::uint32_t>(order_));
  for (double d : discounts_) put(out, d);
  put(out, static_cast<std::uint64_t>(vocab_.total_tokens()));
  put(out, static_cast<std::uint64_t>(vocab_.min_count()));
  put(out, static_cast<std::uint32_t>(vocab_.size()));
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    const auto& w = vocab_.word(static_cast<WordId>(i));
    put(out, static_cast<std::uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
    put(out, static_cast<std::uint64_t>(vocab_.count(static_cast<WordId>(i))));
  }
  for (int level = 1; level <= order_; ++level) {
    std::vector<std::pair<Key, std::uint64_t>> entries(counts_[level - 1].begin(),
                                                       counts_[level - 1].end());
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first.ids < b.first.ids; });
    put(out, static_cast<std::uint64_t>(entries.size()));
    for (const auto& [key, count] : entries) {
      for (int j = 0; j < level; ++j) put(out, key.ids[j]);
      put(out, count);
    }
  }
}

void NGramLM::save(const std::filesystem::path& path) const {
  write_atomically(path, [this](std::ostream& out) { write(out); }, true);
}

NGramLM NGramLM::read(std::istream& in, const std::string& name) {
  char magic[sizeof(kLmMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kLmMagic, sizeof(magic)) != 0) {
    throw FormatError(name, 0, "not a ctxemb language model");
  }
  const auto version = get<std::uint32_t>(in, name);
  if (version != kLmVersion) {
    throw FormatError(name, 0, "unsupported language model version " + std::to_string(version));
  }
  NGramLM lm;
  lm.order_ = static_cast<int>(get<std::uint32_t>(in, name));
  if (lm.order_ < 1 || lm.order_ > kMaxOrder) throw FormatError(name, 0, "bad model order");
  for (int i = 0; i < lm.order_; ++i) lm.discounts_.push_back(get<double>(in, name));
  const auto total = get<std::uint64_t>(in, name);
  const auto min_count = get<std::uint64_t>(in, name);
  const auto vsize = get<std::uint32_t>(in, name);
  std::vector<std::string> words(vsize);
  std::vector<std::uint64_t> counts(vsize);
  for (std::uint32_t i = 0; i < vsize; ++i) {
    const auto len = get<std::uint32_t>(in, name);
    words[i].resize(len);
    if (!in.read(words[i].data(), len)) throw FormatError(name, 0, "truncated vocabulary");
    counts[i] = get<std::uint64_t>(in, name);
  }
  lm.vocab_ = Vocabulary::from_entries(std::move(words), std::move(counts), total, min_count);
  lm.counts_.resize(lm.order_);
  for (int level = 1; level <= lm.order_; ++level) {
    const auto n = get<std::uint64_t>(in, name);
    auto& table = lm.counts_[level - 1];
    table.reserve(n);
    for (std::uint64_t e = 0; e < n; ++e) {
      Key key;
      for (int j = 0; j < level; ++j) key.ids[j] = get<WordId>(in, name);
      table[key] = get<std::uint64_t>(in, name);
    }
  }
  if (lm.counts_[0].empty()) throw FormatError(name, 0, "model has no unigrams");
  lm.rebuild_histories();
  return lm;
}

NGramLM NGramLM::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read(in, path.string());
}

double score_slot(const NGramLM& lm, std::span<const WordId> sentence, std::size_t pos,
                  WordId candidate) {
  if (pos >= sentence.size()) throw std::out_of_range("slot position outside sentence");
  const auto n = static_cast<std::ptrdiff_t>(lm.order());
  const auto last = static_cast<std::ptrdiff_t>(sentence.size()) - 1;
  const auto p = static_cast<std::ptrdiff_t>(pos);
  const auto token = [&](std::ptrdiff_t i) {
    if (i < 0) return lm.bos();
    return i == p ? candidate : sentence[static_cast<std::size_t>(i)];
  };
  std::array<WordId, NGramLM::kMaxOrder> history{};
  double score = 0.0;
  for (auto i = p; i <= std::min(p + n - 1, last); ++i) {
    for (std::ptrdiff_t j = 0; j < n - 1; ++j) history[j] = token(i - (n - 1) + j);
    score += std::log(lm.prob(token(i), {history.data(), static_cast<std::size_t>(n - 1)}));
  }
  return score;
}

SubstituteVector substitutes(const NGramLM& lm, std::span<const WordId> sentence, std::size_t pos,
                             std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (pos >= sentence.size()) throw std::out_of_range("slot position outside sentence");
  const auto vsize = lm.vocabulary().size();
  std::vector<std::pair<double, WordId>> scored(vsize);
  for (std::size_t w = 0; w < vsize; ++w) {
    scored[w] = {score_slot(lm, sentence, pos, static_cast<WordId>(w)), static_cast<WordId>(w)};
  }
  const auto keep = std::min(k, vsize);
  const auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), better);

  SubstituteVector out;
  out.position = pos;
  out.target = sentence[pos];
  if (keep == 0) return out;
  const double top = scored[0].first;
  double sum = 0.0;
  for (std::size_t i = 0; i < keep; ++i) sum += std::exp(scored[i].first - top);
  out.entries.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    out.entries.emplace_back(scored[i].second, std::exp(scored[i].first - top) / sum);
  }
  return out;
}

std::vector<SubstituteVector> generate_substitutes(const NGramLM& lm,
                                                   std::span<const TokenizedSentence> corpus,
                                                   std::size_t k, unsigned workers) {
  std::vector<std::vector<WordId>> encoded;
  encoded.reserve(corpus.size());
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    encoded.push_back(lm.encode(corpus[s]));
    for (std::size_t p = 0; p < encoded.back().size(); ++p) {
      if (encoded.back()[p] < lm.vocabulary().size()) jobs.emplace_back(s, p);
    }
  }
  std::vector<SubstituteVector> out(jobs.size());
  const auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const auto [s, p] = jobs[j];
      out[j] = substitutes(lm, encoded[s], p, k);
      out[j].sentence = s;
    }
  };
  workers = std::max(1u, workers);
  if (workers == 1 || jobs.size() < 2) {
    run(0, jobs.size());
    return out;
  }
  std::vector<std::thread> threads;
  const std::size_t chunk = (jobs.size() + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(jobs.size(), begin + chunk);
    if (begin >= end) break;
    threads.emplace_back(run, begin, end);
  }
  for (auto& th : threads) th.join();
  return out;
}

void write_substitutes(std::ostream& out, std::span<const SubstituteVector> vectors,
                       const Vocabulary& vocab) {
  for (const auto& v : vectors) {
    out << v.sentence << '\t' << v.position;
    for (const auto& [s, p] : v.entries) out << '\t' << vocab.word(s) << ' ' << format_double(p);
    out << '\n';
  }
}

std::vector<SubstituteVector> read_substitutes(std::istream& in, const std::string& name,
                                               const Vocabulary& vocab,
                                               std::span<const TokenizedSentence> corpus) {
  std::vector<SubstituteVector> vectors;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split(line, '\t');
    if (fields.size() < 3) throw FormatError(name, lineno, "expected sent<TAB>pos<TAB>entries");
    SubstituteVector v;
    try {
      v.sentence = static_cast<std::size_t>(parse_int(fields[0]));
      v.position = static_cast<std::size_t>(parse_int(fields[1]));
    } catch (const std::invalid_argument& e) {
      throw FormatError(name, lineno, e.what());
    }
    if (v.sentence >= corpus.size() || v.position >= corpus[v.sentence].tokens.size()) {
      throw FormatError(name, lineno, "occurrence outside the corpus");
    }
    const auto target = vocab.find(corpus[v.sentence].tokens[v.position]);
    if (!target) throw FormatError(name, lineno, "target token is out of vocabulary");
    v.target = *target;
    for (std::size_t f = 2; f < fields.size(); ++f) {
      const auto parts = split(fields[f], ' ');
      if (parts.size() != 2) throw FormatError(name, lineno, "expected 'substitute probability'");
      const auto s = vocab.find(std::string(parts[0]));
      if (!s) throw FormatError(name, lineno, "unknown substitute '" + std::string(parts[0]) + "'");
      try {
        v.entries.emplace_back(*s, parse_double(parts[1]));
      } catch (const std::invalid_argument& e) {
        throw FormatError(name, lineno, e.what());
      }
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace ctxemb
