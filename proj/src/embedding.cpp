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

#include "ctxemb/embedding.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

#include "ctxemb/io.hpp"

namespace ctxemb {

EmbeddingSet::EmbeddingSet(std::vector<std::string> words, Matrix vectors)
    : words_(std::move(words)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(words_.size()) != vectors_.rows()) {
    throw std::invalid_argument("embedding rows do not match word count");
  }
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw std::invalid_argument("duplicate embedding word '" + words_[i] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingSet::find(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSet EmbeddingSet::normalized() const {
  Matrix m = vectors_;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double n = m.row(i).norm();
    if (n > 0) m.row(i) /= n;
  }
  return EmbeddingSet(words_, std::move(m));
}

void EmbeddingSet::write(std::ostream& out) const {
  out << size() << ' ' << dim() << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    out << words_[i];
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j) {
      out << ' ' << format_double(vectors_(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

void EmbeddingSet::save(const std::filesystem::path& path) const {
  write_atomically(path, [this](std::ostream& out) { write(out); });
}

EmbeddingSet EmbeddingSet::read(std::istream& in, const std::string& name) {
  std::vector<std::string> words;
  std::vector<double> values;
  std::size_t dim = 0;
  bool dim_known = false;
  std::optional<std::size_t> declared_rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split_ws(trim(line));
    if (fields.empty()) continue;
    if (lineno == 1 && fields.size() == 2) {
      try {
        const auto rows = parse_int(fields[0]);
        const auto cols = parse_int(fields[1]);
        if (rows >= 0 && cols > 0) {
          declared_rows = static_cast<std::size_t>(rows);
          dim = static_cast<std::size_t>(cols);
          dim_known = true;
          continue;
        }
      } catch (const std::invalid_argument&) {
        // A one-dimensional headerless row; fall through.
      }
    }
    if (!dim_known) {
      dim = fields.size() - 1;
      dim_known = true;
      if (dim == 0) throw FormatError(name, lineno, "row has no vector components");
    }
    if (fields.size() != dim + 1) {
      throw FormatError(name, lineno,
                        "expected " + std::to_string(dim) + " components, got " +
                            std::to_string(fields.size() - 1));
    }
    words.emplace_back(fields[0]);
    for (std::size_t j = 1; j < fields.size(); ++j) {
      try {
        values.push_back(parse_double(fields[j]));
      } catch (const std::invalid_argument& e) {
        throw FormatError(name, lineno, e.what());
      }
    }
  }
  if (declared_rows && *declared_rows != words.size()) {
    throw FormatError(name, 1,
                      "header declares " + std::to_string(*declared_rows) + " rows, file has " +
                          std::to_string(words.size()));
  }
  Matrix m(static_cast<Eigen::Index>(words.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * dim + j];
    }
  }
  try {
    return EmbeddingSet(std::move(words), std::move(m));
  } catch (const std::invalid_argument& e) {
    throw FormatError(name, 0, e.what());
  }
}

EmbeddingSet EmbeddingSet::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read(in, path.string());
}

std::string run_name(const std::string& tag, std::size_t dim) {
  return tag + "-" + std::to_string(dim);
}

}  // namespace ctxemb
