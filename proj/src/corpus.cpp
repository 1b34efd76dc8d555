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

#include "ctxemb/corpus.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "ctxemb/io.hpp"

namespace ctxemb {

std::optional<std::string> validate(const ParsedSentence& sentence) {
  const int n = static_cast<int>(sentence.tokens.size());
  if (n == 0) return "empty sentence";
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int head = sentence.tokens[i].head;
    if (head < 0 || head > n) {
      return "token " + std::to_string(i + 1) + " has head " + std::to_string(head) +
             " outside 0.." + std::to_string(n);
    }
    if (head == i + 1) return "token " + std::to_string(i + 1) + " is its own head";
    if (head == 0) ++roots;
  }
  if (roots == 0) return "no root token";
  return std::nullopt;
}

TokenizedSentence to_tokenized(const ParsedSentence& sentence) {
  TokenizedSentence out;
  out.tokens.reserve(sentence.tokens.size());
  for (const auto& tok : sentence.tokens) out.tokens.push_back(tok.form);
  return out;
}

Vocabulary Vocabulary::from_counts(const std::unordered_map<std::string, std::uint64_t>& counts,
                                   std::uint64_t total_tokens, std::uint64_t min_count) {
  if (min_count == 0) throw std::invalid_argument("min_count must be >= 1");
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (const auto& [word, count] : counts) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  vocab.total_tokens_ = total_tokens;
  vocab.min_count_ = min_count;
  vocab.words_.reserve(kept.size());
  vocab.counts_.reserve(kept.size());
  vocab.index_.reserve(kept.size());
  for (auto& [word, count] : kept) {
    vocab.index_.emplace(word, static_cast<WordId>(vocab.words_.size()));
    vocab.words_.push_back(std::move(word));
    vocab.counts_.push_back(count);
  }
  return vocab;
}

Vocabulary Vocabulary::from_entries(std::vector<std::string> words,
                                    std::vector<std::uint64_t> counts,
                                    std::uint64_t total_tokens, std::uint64_t min_count) {
  if (words.size() != counts.size()) throw std::invalid_argument("words/counts size mismatch");
  Vocabulary vocab;
  vocab.total_tokens_ = total_tokens;
  vocab.min_count_ = min_count;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!vocab.index_.emplace(words[i], static_cast<WordId>(i)).second) {
      throw std::invalid_argument("duplicate vocabulary entry '" + words[i] + "'");
    }
  }
  vocab.words_ = std::move(words);
  vocab.counts_ = std::move(counts);
  return vocab;
}

std::optional<WordId> Vocabulary::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::write(std::ostream& out) const {
  for (std::size_t i = 0; i < words_.size(); ++i) out << words_[i] << '\t' << counts_[i] << '\n';
}

void Vocabulary::save(const std::filesystem::path& path) const {
  write_atomically(path, [this](std::ostream& out) { write(out); });
}

Vocabulary Vocabulary::read(std::istream& in, const std::string& name) {
  Vocabulary vocab;
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t min_seen = UINT64_MAX;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), '\t');
    if (fields.size() != 2) throw FormatError(name, lineno, "expected word<TAB>count");
    std::uint64_t count = 0;
    try {
      const auto parsed = parse_int(fields[1]);
      if (parsed <= 0) throw std::invalid_argument("count must be positive");
      count = static_cast<std::uint64_t>(parsed);
    } catch (const std::invalid_argument& e) {
      throw FormatError(name, lineno, e.what());
    }
    std::string word(fields[0]);
    if (!vocab.index_.emplace(word, static_cast<WordId>(vocab.words_.size())).second) {
      throw FormatError(name, lineno, "duplicate word '" + word + "'");
    }
    vocab.words_.push_back(std::move(word));
    vocab.counts_.push_back(count);
    vocab.total_tokens_ += count;
    min_seen = std::min(min_seen, count);
  }
  vocab.min_count_ = vocab.words_.empty() ? 1 : min_seen;
  return vocab;
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read(in, path.string());
}

Vocabulary build_vocab(std::span<const TokenizedSentence> corpus, std::uint64_t min_count) {
  if (min_count == 0) throw std::invalid_argument("min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& sentence : corpus) {
    for (const auto& tok : sentence.tokens) {
      ++counts[tok];
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("cannot build a vocabulary from an empty corpus");
  return Vocabulary::from_counts(counts, total, min_count);
}

TokenizedCorpus read_tokenized(std::istream& in) {
  TokenizedCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    const auto fields = split_ws(trim(line));
    if (fields.empty()) {
      ++corpus.skipped_lines;
      continue;
    }
    TokenizedSentence sentence;
    sentence.tokens.reserve(fields.size());
    for (auto f : fields) sentence.tokens.push_back(to_lower(f));
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

TokenizedCorpus load_tokenized(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_tokenized(in);
}

void write_tokenized(std::ostream& out, std::span<const TokenizedSentence> corpus) {
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      if (i) out << ' ';
      out << sentence.tokens[i];
    }
    out << '\n';
  }
}

namespace {

bool is_plain_id(std::string_view id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

ParsedCorpus read_conllu(std::istream& in, const std::string& name) {
  ParsedCorpus corpus;
  ParsedSentence current;
  std::optional<std::string> error;
  std::size_t start_line = 0;
  std::size_t lineno = 0;

  const auto flush = [&]() {
    if (current.tokens.empty() && !error) return;
    if (!error) error = validate(current);
    if (error) {
      ++corpus.rejected;
      corpus.diagnostics.push_back(name + ":" + std::to_string(start_line) + ": " + *error);
    } else {
      corpus.sentences.push_back(std::move(current));
    }
    current = ParsedSentence{};
    error.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    if (current.tokens.empty() && !error) start_line = lineno;
    if (error) continue;
    // compact blocks may be space separated
    const auto cols = line.find('\t') == std::string::npos ? split_ws(line) : split(line, '\t');
    if (cols.empty() || !is_plain_id(cols[0])) continue;  // 3-4 ranges, 5.1 empty nodes
    std::string_view form, head, deprel;
    if (cols.size() >= 8) {
      form = cols[1];
      head = cols[6];
      deprel = cols[7];
    } else if (cols.size() == 4) {
      form = cols[1];
      head = cols[2];
      deprel = cols[3];
    } else {
      error = "line " + std::to_string(lineno) + ": expected 10 or 4 columns";
      continue;
    }
    const auto id = parse_int(cols[0]);
    if (id != static_cast<long long>(current.tokens.size()) + 1) {
      error = "line " + std::to_string(lineno) + ": token ids not consecutive";
      continue;
    }
    DepToken tok;
    tok.form = to_lower(form);
    tok.deprel = std::string(deprel);
    try {
      tok.head = static_cast<int>(parse_int(head));
    } catch (const std::invalid_argument&) {
      error = "line " + std::to_string(lineno) + ": non-numeric head '" + std::string(head) + "'";
      continue;
    }
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return corpus;
}

ParsedCorpus load_conllu(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_conllu(in, path.string());
}

void write_conllu(std::ostream& out, std::span<const ParsedSentence> corpus) {
  for (const auto& sentence : corpus) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const auto& tok = sentence.tokens[i];
      out << (i + 1) << '\t' << tok.form << "\t_\t_\t_\t_\t" << tok.head << '\t' << tok.deprel
          << "\t_\t_\n";
    }
    out << '\n';
  }
}

}  // namespace ctxemb
