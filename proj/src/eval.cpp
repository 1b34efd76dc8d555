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

#include "ctxemb/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ctxemb/io.hpp"

namespace ctxemb {

namespace {

std::vector<std::string_view> fields_of(std::string_view line, std::size_t expected) {
  auto fields = split(line, '\t');
  if (fields.size() != expected) fields = split_ws(line);
  return fields;
}

}  // namespace

WordPairDataset WordPairDataset::read(std::istream& in, const std::string& name) {
  WordPairDataset ds;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto fields = fields_of(body, 3);
    if (fields.size() != 3) throw FormatError(name, lineno, "expected word1<TAB>word2<TAB>score");
    WordPair p{to_lower(fields[0]), to_lower(fields[1]), 0.0};
    try {
      p.gold = parse_double(fields[2]);
    } catch (const std::invalid_argument& e) {
      throw FormatError(name, lineno, e.what());
    }
    if (!std::isfinite(p.gold)) throw FormatError(name, lineno, "gold score is not finite");
    auto key = std::minmax(p.first, p.second);
    if (!seen.emplace(key.first, key.second).second) {
      throw FormatError(name, lineno, "duplicate pair " + p.first + ":" + p.second);
    }
    ds.entries.push_back(std::move(p));
  }
  return ds;
}

WordPairDataset WordPairDataset::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read(in, path.string());
}

std::vector<ToeflItem> read_toefl(std::istream& in, const std::string& name) {
  std::vector<ToeflItem> items;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto fields = fields_of(body, 6);
    if (fields.size() != 6) {
      throw FormatError(name, lineno, "expected target, four choices and an answer index");
    }
    ToeflItem item;
    item.target = to_lower(fields[0]);
    for (int i = 0; i < 4; ++i) item.choices[i] = to_lower(fields[1 + i]);
    try {
      item.answer = static_cast<int>(parse_int(fields[5]));
    } catch (const std::invalid_argument& e) {
      throw FormatError(name, lineno, e.what());
    }
    if (item.answer < 0 || item.answer > 3) throw FormatError(name, lineno, "answer index must be 0..3");
    std::set<std::string> distinct(item.choices.begin(), item.choices.end());
    if (distinct.size() != 4) throw FormatError(name, lineno, "choices must be distinct");
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<ToeflItem> load_toefl(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_toefl(in, path.string());
}

std::vector<LabeledSentence> read_sentiment(std::istream& in, const std::string& name) {
  std::vector<LabeledSentence> data;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto tab = body.find('\t');
    if (tab == std::string_view::npos) throw FormatError(name, lineno, "expected label<TAB>sentence");
    LabeledSentence item;
    const auto label = trim(body.substr(0, tab));
    if (label != "0" && label != "1") throw FormatError(name, lineno, "label must be 0 or 1");
    item.label = label == "1";
    for (auto tok : split_ws(body.substr(tab + 1))) item.sentence.tokens.push_back(to_lower(tok));
    data.push_back(std::move(item));
  }
  return data;
}

std::vector<LabeledSentence> load_sentiment(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_sentiment(in, path.string());
}

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine of vectors with different sizes");
  double uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (uu == 0 || vv == 0) return 0.0;
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

double cosine(const Vector& u, const Vector& v) {
  return cosine(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())),
                std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman inputs differ in length");
  if (xs.size() < 2) throw std::invalid_argument("spearman needs at least two observations");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

WordPairScore eval_wordpairs(const EmbeddingSet& e, const WordPairDataset& ds) {
  std::vector<double> gold, predicted;
  for (const auto& p : ds.entries) {
    const auto a = e.find(p.first);
    const auto b = e.find(p.second);
    if (!a || !b) continue;
    gold.push_back(p.gold);
    predicted.push_back(cosine(Vector(e.row(*a)), Vector(e.row(*b))));
  }
  if (gold.size() < 2) {
    throw std::invalid_argument("fewer than two benchmark pairs are covered by the embeddings");
  }
  WordPairScore score;
  score.n_used = gold.size();
  score.n_total = ds.entries.size();
  score.coverage = static_cast<double>(score.n_used) / static_cast<double>(score.n_total);
  score.spearman = spearman(gold, predicted).value_or(std::numeric_limits<double>::quiet_NaN());
  return score;
}

ToeflScore eval_toefl(const EmbeddingSet& e, std::span<const ToeflItem> items) {
  ToeflScore score;
  score.total = items.size();
  for (const auto& item : items) {
    const auto t = e.find(item.target);
    if (!t) continue;
    const Vector tv = e.row(*t);
    int best = -1;
    double best_cos = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
      const auto c = e.find(item.choices[i]);
      if (!c) continue;
      const double cs = cosine(tv, Vector(e.row(*c)));
      if (best < 0 || cs > best_cos) {
        best = i;
        best_cos = cs;
      }
    }
    if (best < 0) continue;
    ++score.answered;
    score.correct += best == item.answer;
  }
  if (score.answered) {
    score.accuracy_covered = static_cast<double>(score.correct) / static_cast<double>(score.answered);
  }
  if (score.total) {
    score.accuracy_all = static_cast<double>(score.correct) / static_cast<double>(score.total);
    score.coverage = static_cast<double>(score.answered) / static_cast<double>(score.total);
  }
  return score;
}

std::vector<std::pair<std::string, double>> nearest_neighbors(const EmbeddingSet& e,
                                                              const std::string& word,
                                                              std::size_t n) {
  const auto q = e.find(word);
  if (!q) throw std::out_of_range("'" + word + "' is not in the embedding vocabulary");
  const Vector qv = e.row(*q);
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i != *q) scored.emplace_back(cosine(qv, Vector(e.row(i))), i);
  }
  const auto keep = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                    [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                    });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.emplace_back(e.words()[scored[i].second], scored[i].first);
  return out;
}

Vector senti_featurize(const EmbeddingSet& e, const TokenizedSentence& sentence, bool* all_oov) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(e.dim()));
  std::size_t known = 0;
  for (const auto& tok : sentence.tokens) {
    if (auto i = e.find(tok)) {
      sum += e.row(*i);
      ++known;
    }
  }
  if (all_oov) *all_oov = known == 0;
  if (known) sum /= static_cast<double>(known);
  return sum;
}

Matrix senti_featurize(const EmbeddingSet& e, std::span<const LabeledSentence> data,
                       std::size_t* all_oov) {
  Matrix x(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(e.dim()));
  std::size_t missing = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    bool none = false;
    x.row(static_cast<Eigen::Index>(i)) = senti_featurize(e, data[i].sentence, &none).transpose();
    missing += none;
  }
  if (all_oov) *all_oov = missing;
  return x;
}

namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sign_of(int label) { return label == 1 ? 1.0 : -1.0; }

void check_inputs(const Matrix& x, std::span<const int> y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw std::invalid_argument("feature rows and labels differ in count");
  }
  if (!x.allFinite()) throw std::invalid_argument("features contain non-finite values");
}

}  // namespace

double logistic_objective(const LogisticModel& m, const Matrix& x, std::span<const int> y,
                          double l2) {
  check_inputs(x, y);
  const Vector z = x * m.weights;
  double loss = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    loss += softplus(-sign_of(y[i]) * (z(static_cast<Eigen::Index>(i)) + m.bias));
  }
  return loss / static_cast<double>(y.size()) + l2 * m.weights.squaredNorm();
}

LogisticModel logistic_gradient(const LogisticModel& m, const Matrix& x, std::span<const int> y,
                                double l2) {
  check_inputs(x, y);
  const Vector z = x * m.weights;
  Vector coef(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double s = sign_of(y[i]);
    const auto r = static_cast<Eigen::Index>(i);
    // d/dz softplus(-s z) = -s * sigmoid(-s z)
    coef(r) = -s / (1.0 + std::exp(s * (z(r) + m.bias)));
  }
  const double n = static_cast<double>(y.size());
  LogisticModel g;
  g.weights = x.transpose() * coef / n + 2.0 * l2 * m.weights;
  g.bias = coef.sum() / n;
  return g;
}

LogisticFit senti_train(const Matrix& x, std::span<const int> y, const LogisticOptions& options) {
  check_inputs(x, y);
  const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
  const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
  if (!has_pos || !has_neg) throw std::invalid_argument("training data must contain both labels");

  LogisticFit fit;
  fit.model.weights = Vector::Zero(x.cols());
  double f = logistic_objective(fit.model, x, y, options.l2);
  fit.objective.push_back(f);
  double step = 1.0;
  for (int it = 0; it < options.max_iter; ++it) {
    const auto g = logistic_gradient(fit.model, x, y, options.l2);
    const double gnorm2 = g.weights.squaredNorm() + g.bias * g.bias;
    if (std::sqrt(gnorm2) < options.tol) {
      fit.converged = true;
      break;
    }
    LogisticModel next;
    double f_next = f;
    bool accepted = false;
    for (step = std::min(step * 2.0, 1e6); step > 1e-20; step *= 0.5) {
      next.weights = fit.model.weights - step * g.weights;
      next.bias = fit.model.bias - step * g.bias;
      f_next = logistic_objective(next, x, y, options.l2);
      if (f_next <= f - 0.5 * step * gnorm2) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    fit.model = std::move(next);
    f = f_next;
    fit.objective.push_back(f);
    fit.iterations = it + 1;
  }
  return fit;
}

double senti_eval(const LogisticModel& m, const Matrix& x, std::span<const int> y) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) {
    throw std::invalid_argument("feature rows and labels differ in count");
  }
  if (y.empty()) return 0.0;
  const Vector z = x * m.weights;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const int predicted = z(static_cast<Eigen::Index>(i)) + m.bias > 0 ? 1 : 0;
    correct += predicted == y[i];
  }
  return static_cast<double>(correct) / static_cast<double>(y.size());
}

}  // namespace ctxemb
