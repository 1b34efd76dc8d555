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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctxemb/corpus.hpp"
#include "ctxemb/embedding.hpp"

namespace ctxemb {

struct WordPair {
  std::string first;
  std::string second;
  double gold = 0.0;
};

/// Word-pair similarity benchmark; "word1<TAB>word2<TAB>score" per line.
struct WordPairDataset {
  std::vector<WordPair> entries;

  static WordPairDataset read(std::istream& in, const std::string& name);
  static WordPairDataset load(const std::filesystem::path& path);
};

struct ToeflItem {
  std::string target;
  std::array<std::string, 4> choices;
  int answer = 0;
};

/// "target<TAB>c1<TAB>c2<TAB>c3<TAB>c4<TAB>answer_index" (0-based index).
std::vector<ToeflItem> read_toefl(std::istream& in, const std::string& name);
std::vector<ToeflItem> load_toefl(const std::filesystem::path& path);

struct LabeledSentence {
  TokenizedSentence sentence;
  int label = 0;
};

/// "label<TAB>space-tokenized sentence", label 0 or 1.
std::vector<LabeledSentence> read_sentiment(std::istream& in, const std::string& name);
std::vector<LabeledSentence> load_sentiment(const std::filesystem::path& path);

/// u.v / (|u||v|); 0 when either vector is zero. Throws on size mismatch.
double cosine(std::span<const double> u, std::span<const double> v);
double cosine(const Vector& u, const Vector& v);

/// 1-based ranks with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks; nullopt when either list is
/// constant. Throws if lengths differ or are below 2.
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

struct WordPairScore {
  double spearman = 0.0;  // NaN if every used cosine (or gold score) is equal
  double coverage = 0.0;
  std::size_t n_used = 0;
  std::size_t n_total = 0;
};

/// Pairs with an out-of-vocabulary word are skipped. Throws when fewer than
/// two pairs are usable.
WordPairScore eval_wordpairs(const EmbeddingSet& e, const WordPairDataset& ds);

struct ToeflScore {
  std::size_t total = 0;
  std::size_t answered = 0;
  std::size_t correct = 0;
  double accuracy_covered = 0.0;  // correct / answered
  double accuracy_all = 0.0;      // correct / total
  double coverage = 0.0;          // answered / total
};

/// Picks the in-vocabulary choice with the highest cosine to the target
/// (first index on ties). Items whose target or every choice is unknown are
/// skipped.
ToeflScore eval_toefl(const EmbeddingSet& e, std::span<const ToeflItem> items);

/// Top-n words by cosine, excluding the query itself; ties by row order.
/// Throws std::out_of_range for an unknown query.
std::vector<std::pair<std::string, double>> nearest_neighbors(const EmbeddingSet& e,
                                                              const std::string& word,
                                                              std::size_t n);

/// Mean of the in-vocabulary word vectors; zero vector (and *all_oov = true)
/// when none are known.
Vector senti_featurize(const EmbeddingSet& e, const TokenizedSentence& sentence,
                       bool* all_oov = nullptr);
/// One feature row per sentence; returns the number of all-OOV sentences.
Matrix senti_featurize(const EmbeddingSet& e, std::span<const LabeledSentence> data,
                       std::size_t* all_oov = nullptr);

struct LogisticModel {
  Vector weights;
  double bias = 0.0;
};

struct LogisticOptions {
  double l2 = 1e-4;
  int max_iter = 1000;
  double tol = 1e-6;
};

struct LogisticFit {
  LogisticModel model;
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective;  // per iteration, starting from w = 0
};

/// mean log(1 + exp(-s_i (w.x_i + b))) + l2 |w|^2, s_i = +1 for label 1 and
/// -1 for label 0. The bias is not regularized.
double logistic_objective(const LogisticModel& m, const Matrix& x, std::span<const int> y,
                          double l2);
LogisticModel logistic_gradient(const LogisticModel& m, const Matrix& x, std::span<const int> y,
                                double l2);

/// Full-batch gradient descent with Armijo backtracking from w = 0, b = 0,
/// until |grad| < tol or max_iter. Throws when a class is missing or a
/// feature is non-finite.
LogisticFit senti_train(const Matrix& x, std::span<const int> y, const LogisticOptions& options);

/// Fraction of rows where [w.x + b > 0] equals the label.
double senti_eval(const LogisticModel& m, const Matrix& x, std::span<const int> y);

}  // namespace ctxemb
