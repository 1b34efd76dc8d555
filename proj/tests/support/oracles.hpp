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

// Reference implementations written straight from the definitions. They share
// no code with the library beyond plain data types and the Rng.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ctxemb/contexts.hpp"
#include "ctxemb/lm.hpp"
#include "ctxemb/rng.hpp"

namespace oracle {

using ctxemb::WordId;

// ---------------------------------------------------------------- contexts

// All (i, j) with 0 < |i - j| <= radius(i).
template <typename Radius>
std::vector<std::pair<WordId, WordId>> window_double_loop(const std::vector<WordId>& ids,
                                                          Radius radius) {
  std::vector<std::pair<WordId, WordId>> out;
  const int n = static_cast<int>(ids.size());
  for (int i = 0; i < n; ++i) {
    const int b = radius(i);
    for (int j = 0; j < n; ++j) {
      if (j != i && std::abs(i - j) <= b) out.emplace_back(ids[i], ids[j]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::pair<WordId, WordId>> as_sorted_pairs(
    const std::vector<ctxemb::WeightedPair>& pairs) {
  std::vector<std::pair<WordId, WordId>> out;
  for (const auto& p : pairs) out.emplace_back(p.target, p.context);
  std::sort(out.begin(), out.end());
  return out;
}

// Algorithm R per target type; returns selected indices ascending.
inline std::vector<std::size_t> reservoir(const std::vector<WordId>& targets, std::size_t cap,
                                          ctxemb::Rng& rng) {
  std::map<WordId, std::pair<std::size_t, std::vector<std::size_t>>> by_type;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    auto& [seen, kept] = by_type[targets[i]];
    seen += 1;
    if (kept.size() < cap) {
      kept.push_back(i);
    } else {
      const std::size_t j = rng.below(seen);
      if (j < cap) kept[j] = i;
    }
  }
  std::vector<std::size_t> out;
  for (auto& [t, entry] : by_type) out.insert(out.end(), entry.second.begin(), entry.second.end());
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- lm

// Interpolated Kneser-Ney over string tokens, evaluated by direct recursion
// over explicitly enumerated count tables.
class KneserNey {
 public:
  using Gram = std::vector<std::string>;

  KneserNey(const std::vector<std::vector<std::string>>& sentences, const std::set<std::string>& vocab,
            int order, double discount)
      : order_(order), d_(discount), vocab_(vocab) {
    for (const auto& s : sentences) {
      Gram padded(order - 1, "<s>");
      for (const auto& w : s) padded.push_back(vocab.count(w) ? w : "<unk>");
      padded.push_back("</s>");
      for (std::size_t i = order - 1; i < padded.size(); ++i) {
        raw_[Gram(padded.begin() + i + 1 - order, padded.begin() + i + 1)] += 1;
      }
    }
    // predictable outcomes: every vocabulary word, <unk>, </s>
    outcomes_ = std::vector<std::string>(vocab.begin(), vocab.end());
    outcomes_.push_back("<unk>");
    outcomes_.push_back("</s>");
  }

  const std::vector<std::string>& outcomes() const { return outcomes_; }

  // c_KN(g): raw count at the top order, number of distinct left extensions below.
  double count(const Gram& g) const {
    if (static_cast<int>(g.size()) == order_) {
      auto it = raw_.find(g);
      return it == raw_.end() ? 0.0 : it->second;
    }
    std::set<std::string> left;
    for (const auto& [gram, c] : raw_) {
      if (std::equal(g.begin(), g.end(), gram.end() - static_cast<long>(g.size()))) {
        left.insert(gram[gram.size() - g.size() - 1]);
      }
    }
    return static_cast<double>(left.size());
  }

  double prob(const std::string& w, Gram history) const {
    if (w == "<s>") return 0.0;
    if (static_cast<int>(history.size()) > order_ - 1) {
      history.erase(history.begin(), history.end() - (order_ - 1));
    }
    return level_prob(w, history);
  }

 private:
  double level_prob(const std::string& w, const Gram& h) const {
    double total = 0, types = 0;
    for (const auto& v : outcomes_) {
      Gram g = h;
      g.push_back(v);
      const double c = count(g);
      total += c;
      types += c > 0;
    }
    Gram hw = h;
    hw.push_back(w);
    if (h.empty()) {
      return std::max(count(hw) - d_, 0.0) / total +
             d_ * types / total / static_cast<double>(outcomes_.size());
    }
    const Gram shorter(h.begin() + 1, h.end());
    const double lower = level_prob(w, shorter);
    if (total == 0) return lower;
    return std::max(count(hw) - d_, 0.0) / total + d_ * types / total * lower;
  }

  int order_;
  double d_;
  std::set<std::string> vocab_;
  std::vector<std::string> outcomes_;
  std::map<Gram, double> raw_;
};

// Scores every candidate with lm.prob and sorts the whole vocabulary.
inline std::vector<std::pair<WordId, double>> brute_force_substitutes(const ctxemb::NGramLM& lm,
                                                                     const std::vector<WordId>& sent,
                                                                     std::size_t pos, std::size_t k) {
  const int n = lm.order();
  std::vector<std::pair<double, WordId>> all;
  for (WordId c = 0; c < lm.vocabulary().size(); ++c) {
    auto s = sent;
    s[pos] = c;
    double score = 0;
    for (std::size_t i = pos; i < s.size() && i < pos + n; ++i) {
      std::vector<WordId> h;
      for (int j = n - 1; j >= 1; --j) {
        const auto at = static_cast<long>(i) - j;
        h.push_back(at < 0 ? lm.bos() : s[at]);
      }
      score += std::log(lm.prob(s[i], h));
    }
    all.emplace_back(score, c);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  all.resize(std::min(k, all.size()));
  double z = 0;
  for (const auto& e : all) z += std::exp(e.first - all[0].first);
  std::vector<std::pair<WordId, double>> out;
  for (const auto& e : all) out.emplace_back(e.second, std::exp(e.first - all[0].first) / z);
  return out;
}

// ---------------------------------------------------------------- linear algebra

using Dense = std::vector<std::vector<double>>;

inline Dense gram_matrix(const Dense& x) {  // X^T X
  const std::size_t n = x.size(), d = x[0].size();
  Dense g(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) g[a][b] += x[i][a] * x[i][b];
  return g;
}

// Cyclic Jacobi rotations; returns eigenvalues descending.
inline std::vector<double> symmetric_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

// Eckart-Young: ||X - X_k||_F^2 = sum of the trailing eigenvalues of X^T X.
inline double eckart_young_error(const Dense& x, std::size_t k) {
  const auto ev = symmetric_eigenvalues(gram_matrix(x));
  double tail = 0;
  for (std::size_t i = k; i < ev.size(); ++i) tail += std::max(ev[i], 0.0);
  return std::sqrt(tail);
}

// ---------------------------------------------------------------- eval

inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = less + (equal + 1) / 2;
  }
  return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(average_ranks(x), average_ranks(y));
}

// log sigma(v'_c . v_t) + sum log sigma(-v'_n . v_t) with plain scalar loops.
inline double sgns_loss(const std::vector<double>& vt, const std::vector<double>& vc,
                        const std::vector<std::vector<double>>& negs) {
  auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  double l = -std::log1p(std::exp(-dot(vt, vc)));
  for (const auto& n : negs) l += -std::log1p(std::exp(dot(vt, n)));
  return l;
}

}  // namespace oracle
