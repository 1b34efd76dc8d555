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

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ctxemb/contexts.hpp"
#include "ctxemb/corpus.hpp"
#include "ctxemb/embedding.hpp"
#include "ctxemb/rng.hpp"

namespace ctxemb {

struct TrainConfig {
  std::size_t dim = 100;
  int negatives = 5;
  int epochs = 3;
  double initial_lr = 0.025;
  double table_exponent = 0.75;
  std::uint64_t seed = 1;
  unsigned workers = 1;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;
};

/// Unweighted co-occurrence, trained as if every weight were 1.
struct ContextPair {
  WordId target = 0;
  WordId context = 0;
};

/// Target (W) and context (C) matrices, row-major, plus schedule state.
struct TrainState {
  std::size_t dim = 0;
  std::size_t n_targets = 0;
  std::size_t n_contexts = 0;
  std::vector<double> targets;
  std::vector<double> contexts;
  std::uint64_t pairs_seen = 0;
  double lr = 0.0;

  std::span<double> target(WordId t) { return {targets.data() + t * dim, dim}; }
  std::span<const double> target(WordId t) const { return {targets.data() + t * dim, dim}; }
  std::span<double> context(WordId c) { return {contexts.data() + c * dim, dim}; }
  std::span<const double> context(WordId c) const { return {contexts.data() + c * dim, dim}; }

  bool all_finite() const;
};

/// W uniform in [-0.5/dim, 0.5/dim) from config.seed, C zero, lr = initial_lr.
TrainState init_state(std::size_t n_targets, std::size_t n_contexts, const TrainConfig& config);

/// Draws context ids with probability proportional to count^exponent.
class NegativeSampler {
 public:
  NegativeSampler(std::span<const std::uint64_t> counts, double exponent);

  std::size_t size() const { return cumulative_.size(); }
  WordId draw(Rng& rng) const;
  double probability(WordId id) const;

 private:
  std::vector<double> cumulative_;  // normalized, last entry 1
};

/// A draw that differs from `positive`, retried at most 100 times; after that
/// the last draw is returned even if it equals `positive`.
WordId negative_sample(const NegativeSampler& sampler, Rng& rng, WordId positive);

double log_sigmoid(double x);
double sigmoid(double x);

/// log s(v'_c . v_t) + sum over negs of log s(-v'_neg . v_t).
double pair_loss(const TrainState& state, WordId t, WordId c, std::span<const WordId> negs);

/// One gradient ascent step on weight * pair_loss with step state.lr. Every
/// context row is updated with the pre-update v_t; v_t receives the summed
/// delta afterwards.
void pair_update(TrainState& state, WordId t, WordId c, double weight,
                 std::span<const WordId> negs);

struct TrainResult {
  EmbeddingSet targets;
  EmbeddingSet contexts;
};

/// Called after each epoch with the epoch number (1-based). Single-worker
/// runs call it with a consistent state; multi-worker runs after the join.
using EpochCallback = std::function<void(int epoch, const TrainState& state)>;

/// Skip-gram with negative sampling over an arbitrary pair stream. The
/// learning rate decays linearly over epochs * |pairs| processed pairs down
/// to a floor of initial_lr * 1e-4. workers == 1 is bit-reproducible;
/// more workers update shared rows without locks.
TrainResult train(std::span<const WeightedPair> pairs, const Vocabulary& words,
                  const ContextVocabulary& contexts, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});
TrainResult train(std::span<const ContextPair> pairs, const Vocabulary& words,
                  const ContextVocabulary& contexts, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

}  // namespace ctxemb
