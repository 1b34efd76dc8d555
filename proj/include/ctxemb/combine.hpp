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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ctxemb/embedding.hpp"
#include "ctxemb/eval.hpp"

namespace ctxemb {

/// Rows of A and B over the words both contain, in A's order, side by side.
/// Throws if the vocabularies do not intersect.
EmbeddingSet concat(const EmbeddingSet& a, const EmbeddingSet& b);

/// A and B restricted to their shared words, rows aligned (A's order).
std::pair<EmbeddingSet, EmbeddingSet> align(const EmbeddingSet& a, const EmbeddingSet& b);

struct SvdReduction {
  EmbeddingSet embeddings;
  std::vector<double> singular_values;  // all of them, descending
  std::size_t rank = 0;
  bool rank_deficient = false;          // k > rank; trailing columns are zero
};

/// Thin SVD of the (optionally column-centered) matrix X = U S V^T; output
/// rows are the rows of U_k S_k^power. Throws if k is 0 or exceeds dim.
SvdReduction svd_reduce(const EmbeddingSet& e, std::size_t k, double power = 1.0,
                        bool center = true);

struct CcaModel {
  Vector mean_x;
  Vector mean_y;
  Matrix proj_x;                     // d_x x k
  Matrix proj_y;                     // d_y x k
  std::vector<double> correlations;  // descending
  double reg_x = 0.0;
  double reg_y = 0.0;

  std::size_t k() const { return correlations.size(); }

  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  static CcaModel read(std::istream& in, const std::string& name);
  static CcaModel load(const std::filesystem::path& path);
};

/// Linear regularized CCA of two row-aligned views X (n x d_x), Y (n x d_y).
/// Throws if k is 0, k > min(d_x, d_y), n <= k, or a covariance matrix is
/// singular and its regularizer is zero.
CcaModel cca_fit(const Matrix& x, const Matrix& y, std::size_t k, double reg_x, double reg_y);
/// Fits on the shared vocabulary of A and B.
CcaModel cca_fit(const EmbeddingSet& a, const EmbeddingSet& b, std::size_t k, double reg_x,
                 double reg_y);

enum class CcaView { X, Y };

Matrix cca_apply(const CcaModel& model, const Matrix& rows, CcaView view);
EmbeddingSet cca_apply(const CcaModel& model, const EmbeddingSet& e, CcaView view);

struct CcaTuningRow {
  std::size_t k = 0;
  double reg = 0.0;
  double spearman = 0.0;  // NaN when the cell could not be scored
};

struct CcaTuning {
  CcaModel model;
  std::size_t best = 0;  // index into report
  std::vector<CcaTuningRow> report;
};

/// Exhaustive grid over k x reg (reg used for both views). Each cell is
/// scored by Spearman of the view-x projection on `benchmark`; the first
/// best cell in grid order wins. Throws on an empty grid or if no cell scores.
CcaTuning tune_cca(const EmbeddingSet& a, const EmbeddingSet& b, const WordPairDataset& benchmark,
                   std::span<const std::size_t> k_grid, std::span<const double> reg_grid);

/// "k<TAB>r<TAB>spearman" rows.
void write_tuning_report(std::ostream& out, std::span<const CcaTuningRow> report);

}  // namespace ctxemb
