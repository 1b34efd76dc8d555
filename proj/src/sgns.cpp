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

#include "ctxemb/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace ctxemb {

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (negatives < 0) throw std::invalid_argument("negatives must be >= 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(initial_lr > 0)) throw std::invalid_argument("initial_lr must be > 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

bool TrainState::all_finite() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  return std::all_of(targets.begin(), targets.end(), finite) &&
         std::all_of(contexts.begin(), contexts.end(), finite);
}

TrainState init_state(std::size_t n_targets, std::size_t n_contexts, const TrainConfig& config) {
  config.validate();
  if (n_targets == 0 || n_contexts == 0) throw std::invalid_argument("vocabularies must be non-empty");
  TrainState state;
  state.dim = config.dim;
  state.n_targets = n_targets;
  state.n_contexts = n_contexts;
  state.targets.resize(n_targets * config.dim);
  state.contexts.assign(n_contexts * config.dim, 0.0);
  state.lr = config.initial_lr;
  Rng rng(config.seed);
  const double scale = 1.0 / static_cast<double>(config.dim);
  for (auto& x : state.targets) x = (rng.uniform() - 0.5) * scale;
  return state;
}

NegativeSampler::NegativeSampler(std::span<const std::uint64_t> counts, double exponent) {
  if (counts.empty()) throw std::invalid_argument("negative sampler needs at least one context");
  cumulative_.reserve(counts.size());
  double acc = 0.0;
  for (auto c : counts) {
    acc += std::pow(static_cast<double>(c), exponent);
    cumulative_.push_back(acc);
  }
  if (!(acc > 0)) throw std::invalid_argument("negative sampler weights sum to zero");
  for (auto& x : cumulative_) x /= acc;
  cumulative_.back() = 1.0;
}

WordId NegativeSampler::draw(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<WordId>(it - cumulative_.begin());
}

double NegativeSampler::probability(WordId id) const {
  const double hi = cumulative_.at(id);
  return id == 0 ? hi : hi - cumulative_[id - 1];
}

WordId negative_sample(const NegativeSampler& sampler, Rng& rng, WordId positive) {
  WordId draw = sampler.draw(rng);
  for (int attempt = 1; attempt < 100 && draw == positive; ++attempt) draw = sampler.draw(rng);
  return draw;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Shared by pair_update and the trainer; `delta` is caller-owned scratch of
// length dim.
void update_pair(double* targets, double* contexts, std::size_t dim, WordId t, WordId c,
                 double step, std::span<const WordId> negs, double* delta) {
  double* vt = targets + static_cast<std::size_t>(t) * dim;
  std::fill(delta, delta + dim, 0.0);
  const auto apply = [&](WordId ctx, double label) {
    double* vc = contexts + static_cast<std::size_t>(ctx) * dim;
    const double g = step * (label - sigmoid(dot(vc, vt, dim)));
    for (std::size_t i = 0; i < dim; ++i) delta[i] += g * vc[i];
    for (std::size_t i = 0; i < dim; ++i) vc[i] += g * vt[i];
  };
  apply(c, 1.0);
  for (auto n : negs) apply(n, 0.0);
  for (std::size_t i = 0; i < dim; ++i) vt[i] += delta[i];
}

}  // namespace

double pair_loss(const TrainState& state, WordId t, WordId c, std::span<const WordId> negs) {
  const auto vt = state.target(t);
  double loss = log_sigmoid(dot(state.context(c).data(), vt.data(), state.dim));
  for (auto n : negs) loss += log_sigmoid(-dot(state.context(n).data(), vt.data(), state.dim));
  return loss;
}

void pair_update(TrainState& state, WordId t, WordId c, double weight,
                 std::span<const WordId> negs) {
  if (!(weight > 0)) throw std::invalid_argument("pair weight must be > 0");
  std::vector<double> delta(state.dim);
  update_pair(state.targets.data(), state.contexts.data(), state.dim, t, c, state.lr * weight,
              negs, delta.data());
  ++state.pairs_seen;
}

namespace {

inline double weight_of(const WeightedPair& p) { return p.weight; }
inline constexpr double weight_of(const ContextPair&) { return 1.0; }

template <typename Pair>
TrainResult train_impl(std::span<const Pair> pairs, const Vocabulary& words,
                       const ContextVocabulary& contexts, const TrainConfig& config,
                       const EpochCallback& on_epoch) {
  config.validate();
  if (pairs.empty()) throw std::invalid_argument("cannot train on an empty pair stream");
  for (const auto& p : pairs) {
    if (p.target >= words.size() || p.context >= contexts.size()) {
      throw std::out_of_range("pair references an id outside the vocabularies");
    }
    if (!(weight_of(p) > 0)) throw std::invalid_argument("pair weights must be > 0");
  }

  TrainState state = init_state(words.size(), contexts.size(), config);
  const NegativeSampler sampler(contexts.counts(), config.table_exponent);
  const double total = static_cast<double>(pairs.size()) * config.epochs;
  const double floor_lr = config.initial_lr * 1e-4;
  const std::size_t dim = config.dim;
  std::atomic<std::uint64_t> processed{0};

  const auto run_shard = [&](std::size_t begin, std::size_t end, Rng& rng, int epoch_begin,
                             int epoch_end) {
    std::vector<double> delta(dim);
    std::vector<WordId> negs(static_cast<std::size_t>(config.negatives));
    for (int epoch = epoch_begin; epoch < epoch_end; ++epoch) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto& p = pairs[i];
        const auto seen = processed.fetch_add(1, std::memory_order_relaxed);
        const double lr =
            std::max(config.initial_lr * (1.0 - static_cast<double>(seen) / total), floor_lr);
        for (auto& n : negs) n = negative_sample(sampler, rng, p.context);
        update_pair(state.targets.data(), state.contexts.data(), dim, p.target, p.context,
                    lr * weight_of(p), negs, delta.data());
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(config.workers, pairs.size()));
  if (workers <= 1) {
    Rng rng(config.seed);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      run_shard(0, pairs.size(), rng, epoch, epoch + 1);
      state.pairs_seen = processed.load();
      state.lr = std::max(config.initial_lr * (1.0 - static_cast<double>(state.pairs_seen) / total),
                          floor_lr);
      if (on_epoch) on_epoch(epoch + 1, state);
    }
  } else {
    // Lock-free shared updates across disjoint shards; each worker runs all
    // epochs over its own shard.
    std::vector<std::thread> threads;
    std::vector<Rng> rngs;
    for (unsigned w = 0; w < workers; ++w) rngs.emplace_back(config.seed + 0x9e3779b97f4a7c15ull * w);
    const std::size_t chunk = (pairs.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(pairs.size(), begin + chunk);
      if (begin >= end) break;
      threads.emplace_back([&, begin, end, w] { run_shard(begin, end, rngs[w], 0, config.epochs); });
    }
    for (auto& th : threads) th.join();
    state.pairs_seen = processed.load();
    state.lr = floor_lr;
    if (on_epoch) on_epoch(config.epochs, state);
  }

  Matrix w(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(dim));
  Matrix c(static_cast<Eigen::Index>(contexts.size()), static_cast<Eigen::Index>(dim));
  std::copy(state.targets.begin(), state.targets.end(), w.data());
  std::copy(state.contexts.begin(), state.contexts.end(), c.data());
  return {EmbeddingSet(words.words(), std::move(w)), EmbeddingSet(contexts.words(), std::move(c))};
}

}  // namespace

TrainResult train(std::span<const WeightedPair> pairs, const Vocabulary& words,
                  const ContextVocabulary& contexts, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  return train_impl(pairs, words, contexts, config, on_epoch);
}

TrainResult train(std::span<const ContextPair> pairs, const Vocabulary& words,
                  const ContextVocabulary& contexts, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  return train_impl(pairs, words, contexts, config, on_epoch);
}

}  // namespace ctxemb
