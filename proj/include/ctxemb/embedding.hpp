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

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ctxemb {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Words plus one row vector per word.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  /// Throws if words are not distinct or do not match the row count.
  EmbeddingSet(std::vector<std::string> words, Matrix vectors);

  std::size_t size() const { return words_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }

  const std::vector<std::string>& words() const { return words_; }
  const Matrix& vectors() const { return vectors_; }
  std::optional<std::size_t> find(const std::string& word) const;
  bool contains(const std::string& word) const { return index_.count(word) != 0; }
  Eigen::Ref<const Vector> row(std::size_t i) const { return vectors_.row(static_cast<Eigen::Index>(i)).transpose(); }

  /// Copy with every row scaled to unit L2 norm (zero rows stay zero).
  EmbeddingSet normalized() const;

  /// "V dim" header, then "word v_1 ... v_dim" with round-trip decimals.
  void write(std::ostream& out) const;
  void save(const std::filesystem::path& path) const;
  /// Accepts files with or without the "V dim" header line.
  static EmbeddingSet read(std::istream& in, const std::string& name);
  static EmbeddingSet load(const std::filesystem::path& path);

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  Matrix vectors_;
};

/// Run naming used for output files: W5-300, DEP-300, W10+DEP-600.
std::string run_name(const std::string& tag, std::size_t dim);

}  // namespace ctxemb
