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

#include "ctxemb/combine.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ctxemb/io.hpp"

namespace ctxemb {

std::pair<EmbeddingSet, EmbeddingSet> align(const EmbeddingSet& a, const EmbeddingSet& b) {
  std::vector<std::string> words;
  std::vector<std::size_t> rows_a, rows_b;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (auto j = b.find(a.words()[i])) {
      words.push_back(a.words()[i]);
      rows_a.push_back(i);
      rows_b.push_back(*j);
    }
  }
  if (words.empty()) throw std::invalid_argument("embedding vocabularies do not intersect");
  const auto n = static_cast<Eigen::Index>(words.size());
  Matrix ma(n, a.vectors().cols()), mb(n, b.vectors().cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    ma.row(r) = a.vectors().row(static_cast<Eigen::Index>(rows_a[r]));
    mb.row(r) = b.vectors().row(static_cast<Eigen::Index>(rows_b[r]));
  }
  return {EmbeddingSet(words, std::move(ma)), EmbeddingSet(words, std::move(mb))};
}

EmbeddingSet concat(const EmbeddingSet& a, const EmbeddingSet& b) {
  auto [xa, xb] = align(a, b);
  Matrix m(xa.vectors().rows(), xa.vectors().cols() + xb.vectors().cols());
  m << xa.vectors(), xb.vectors();
  return EmbeddingSet(xa.words(), std::move(m));
}

SvdReduction svd_reduce(const EmbeddingSet& e, std::size_t k, double power, bool center) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (k > e.dim()) throw std::invalid_argument("k exceeds the embedding dimensionality");
  if (power < 0.0 || power > 1.0) throw std::invalid_argument("power must lie in [0, 1]");
  Eigen::MatrixXd x = e.vectors();
  if (center) x.rowwise() -= x.colwise().mean();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const auto& u = svd.matrixU();

  SvdReduction out;
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double tol = s.size() ? s(0) * std::numeric_limits<double>::epsilon() *
                                    static_cast<double>(std::max(x.rows(), x.cols()))
                              : 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) out.rank += s(i) > tol;
  out.rank_deficient = k > out.rank;

  Matrix reduced = Matrix::Zero(x.rows(), static_cast<Eigen::Index>(k));
  const auto usable = static_cast<Eigen::Index>(std::min(k, out.rank));
  for (Eigen::Index j = 0; j < usable; ++j) {
    reduced.col(j) = u.col(j) * std::pow(s(j), power);
  }
  out.embeddings = EmbeddingSet(e.words(), std::move(reduced));
  return out;
}

namespace {

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& cov, double reg, const char* view) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const auto& vals = eig.eigenvalues();
  const double largest = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  if (vals.minCoeff() <= 1e-12 * largest) {
    if (reg == 0.0) {
      throw std::invalid_argument(std::string("covariance of view ") + view +
                                  " is singular; use a positive regularizer");
    }
    if (vals.minCoeff() <= 0.0) {
      throw std::invalid_argument(std::string("covariance of view ") + view +
                                  " is not positive definite");
    }
  }
  return eig.eigenvectors() * vals.cwiseSqrt().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

CcaModel cca_fit(const Matrix& x, const Matrix& y, std::size_t k, double reg_x, double reg_y) {
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  if (x.rows() != y.rows()) throw std::invalid_argument("views must have the same number of rows");
  const auto dx = static_cast<std::size_t>(x.cols());
  const auto dy = static_cast<std::size_t>(y.cols());
  if (k > std::min(dx, dy)) throw std::invalid_argument("k exceeds min(d_x, d_y)");
  if (static_cast<std::size_t>(x.rows()) <= k) {
    throw std::invalid_argument("need more shared rows than projection dimensions");
  }
  if (reg_x < 0 || reg_y < 0) throw std::invalid_argument("regularizers must be >= 0");

  CcaModel model;
  model.reg_x = reg_x;
  model.reg_y = reg_y;
  model.mean_x = x.colwise().mean().transpose();
  model.mean_y = y.colwise().mean().transpose();
  const Eigen::MatrixXd xc = x.rowwise() - model.mean_x.transpose();
  const Eigen::MatrixXd yc = y.rowwise() - model.mean_y.transpose();
  const double n = static_cast<double>(x.rows());

  Eigen::MatrixXd sxx = xc.transpose() * xc / n;
  Eigen::MatrixXd syy = yc.transpose() * yc / n;
  const Eigen::MatrixXd sxy = xc.transpose() * yc / n;
  sxx.diagonal().array() += reg_x;
  syy.diagonal().array() += reg_y;

  const Eigen::MatrixXd wx = inverse_sqrt(sxx, reg_x, "x");
  const Eigen::MatrixXd wy = inverse_sqrt(syy, reg_y, "y");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(wx * sxy * wy, Eigen::ComputeThinU | Eigen::ComputeThinV);

  const auto kk = static_cast<Eigen::Index>(k);
  model.proj_x = wx * svd.matrixU().leftCols(kk);
  model.proj_y = wy * svd.matrixV().leftCols(kk);
  model.correlations.assign(svd.singularValues().data(), svd.singularValues().data() + kk);
  return model;
}

CcaModel cca_fit(const EmbeddingSet& a, const EmbeddingSet& b, std::size_t k, double reg_x,
                 double reg_y) {
  auto [xa, xb] = align(a, b);
  return cca_fit(xa.vectors(), xb.vectors(), k, reg_x, reg_y);
}

Matrix cca_apply(const CcaModel& model, const Matrix& rows, CcaView view) {
  if (model.k() == 0) throw std::invalid_argument("CCA model has no projection dimensions");
  const auto& mean = view == CcaView::X ? model.mean_x : model.mean_y;
  const auto& proj = view == CcaView::X ? model.proj_x : model.proj_y;
  if (rows.cols() != mean.size()) {
    throw std::invalid_argument("embedding dimensionality " + std::to_string(rows.cols()) +
                                " does not match the CCA view (" + std::to_string(mean.size()) + ")");
  }
  return (rows.rowwise() - mean.transpose()) * proj;
}

EmbeddingSet cca_apply(const CcaModel& model, const EmbeddingSet& e, CcaView view) {
  return EmbeddingSet(e.words(), cca_apply(model, e.vectors(), view));
}

namespace {

constexpr char kCcaMagic[8] = {'C', 'T', 'X', 'C', 'C', 'A', '\0', '\0'};
constexpr std::uint32_t kCcaVersion = 1;

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& name) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) {
    throw FormatError(name, 0, "truncated CCA model file");
  }
  return value;
}

}  // namespace

void CcaModel::write(std::ostream& out) const {
  out.write(kCcaMagic, sizeof(kCcaMagic));
  put(out, kCcaVersion);
  put(out, static_cast<std::uint64_t>(mean_x.size()));
  put(out, static_cast<std::uint64_t>(mean_y.size()));
  put(out, static_cast<std::uint64_t>(k()));
  put(out, reg_x);
  put(out, reg_y);
  for (Eigen::Index i = 0; i < mean_x.size(); ++i) put(out, mean_x(i));
  for (Eigen::Index i = 0; i < mean_y.size(); ++i) put(out, mean_y(i));
  for (Eigen::Index i = 0; i < proj_x.size(); ++i) put(out, proj_x.data()[i]);
  for (Eigen::Index i = 0; i < proj_y.size(); ++i) put(out, proj_y.data()[i]);
  for (double c : correlations) put(out, c);
}

void CcaModel::save(const std::filesystem::path& path) const {
  write_atomically(path, [this](std::ostream& out) { write(out); }, true);
}

CcaModel CcaModel::read(std::istream& in, const std::string& name) {
  char magic[sizeof(kCcaMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kCcaMagic, sizeof(magic)) != 0) {
    throw FormatError(name, 0, "not a ctxemb CCA model");
  }
  const auto version = get<std::uint32_t>(in, name);
  if (version != kCcaVersion) {
    throw FormatError(name, 0, "unsupported CCA model version " + std::to_string(version));
  }
  const auto dx = static_cast<Eigen::Index>(get<std::uint64_t>(in, name));
  const auto dy = static_cast<Eigen::Index>(get<std::uint64_t>(in, name));
  const auto k = static_cast<Eigen::Index>(get<std::uint64_t>(in, name));
  CcaModel m;
  m.reg_x = get<double>(in, name);
  m.reg_y = get<double>(in, name);
  m.mean_x.resize(dx);
  m.mean_y.resize(dy);
  m.proj_x.resize(dx, k);
  m.proj_y.resize(dy, k);
  for (Eigen::Index i = 0; i < dx; ++i) m.mean_x(i) = get<double>(in, name);
  for (Eigen::Index i = 0; i < dy; ++i) m.mean_y(i) = get<double>(in, name);
  for (Eigen::Index i = 0; i < m.proj_x.size(); ++i) m.proj_x.data()[i] = get<double>(in, name);
  for (Eigen::Index i = 0; i < m.proj_y.size(); ++i) m.proj_y.data()[i] = get<double>(in, name);
  for (Eigen::Index i = 0; i < k; ++i) m.correlations.push_back(get<double>(in, name));
  return m;
}

CcaModel CcaModel::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read(in, path.string());
}

CcaTuning tune_cca(const EmbeddingSet& a, const EmbeddingSet& b, const WordPairDataset& benchmark,
                   std::span<const std::size_t> k_grid, std::span<const double> reg_grid) {
  if (k_grid.empty() || reg_grid.empty()) throw std::invalid_argument("empty CCA tuning grid");
  auto [xa, xb] = align(a, b);
  CcaTuning result;
  double best_score = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (auto k : k_grid) {
    for (auto reg : reg_grid) {
      CcaTuningRow row{k, reg, std::numeric_limits<double>::quiet_NaN()};
      try {
        auto model = cca_fit(xa.vectors(), xb.vectors(), k, reg, reg);
        const auto projected = cca_apply(model, xa, CcaView::X);
        row.spearman = eval_wordpairs(projected, benchmark).spearman;
        if (!std::isnan(row.spearman) && (!found || row.spearman > best_score)) {
          best_score = row.spearman;
          result.model = std::move(model);
          result.best = result.report.size();
          found = true;
        }
      } catch (const std::invalid_argument&) {
        // Cell left unscored.
      }
      result.report.push_back(row);
    }
  }
  if (!found) throw std::invalid_argument("no CCA grid cell could be scored on the benchmark");
  return result;
}

void write_tuning_report(std::ostream& out, std::span<const CcaTuningRow> report) {
  out << "k\tr\tspearman\n";
  for (const auto& row : report) {
    out << row.k << '\t' << format_double(row.reg) << '\t'
        << (std::isnan(row.spearman) ? std::string("nan") : format_double(row.spearman)) << '\n';
  }
}

}  // namespace ctxemb
