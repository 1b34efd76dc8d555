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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cli.hpp"
#include "ctxemb/combine.hpp"
#include "ctxemb/eval.hpp"
#include "ctxemb/lm.hpp"
#include "ctxemb/pipeline.hpp"
#include "ctxemb/sgns.hpp"

namespace py = pybind11;
using namespace ctxemb;

namespace {

std::vector<TokenizedSentence> to_sentences(const std::vector<std::vector<std::string>>& rows) {
  std::vector<TokenizedSentence> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(TokenizedSentence{r});
  return out;
}

std::vector<std::pair<std::string, double>> named(const SubstituteVector& v, const Vocabulary& vocab) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [id, p] : v.entries) out.emplace_back(vocab.word(id), p);
  return out;
}

CcaView parse_view(const std::string& v) {
  if (v == "x") return CcaView::X;
  if (v == "y") return CcaView::Y;
  throw std::invalid_argument("view must be 'x' or 'y'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Embeddings from window, dependency and substitute contexts";

  py::class_<Vocabulary>(m, "Vocabulary")
      .def_static("build", [](const std::vector<std::vector<std::string>>& s, std::uint64_t min_count) {
        return build_vocab(to_sentences(s), min_count);
      }, py::arg("sentences"), py::arg("min_count") = 1)
      .def_static("load", &Vocabulary::load)
      .def("save", &Vocabulary::save)
      .def("__len__", &Vocabulary::size)
      .def("__contains__", &Vocabulary::contains)
      .def("find", &Vocabulary::find)
      .def("word", &Vocabulary::word)
      .def_property_readonly("words", &Vocabulary::words)
      .def_property_readonly("counts", &Vocabulary::counts)
      .def_property_readonly("total_tokens", &Vocabulary::total_tokens);

  py::class_<WeightedPair>(m, "WeightedPair")
      .def_readonly("target", &WeightedPair::target)
      .def_readonly("context", &WeightedPair::context)
      .def_readonly("weight", &WeightedPair::weight)
      .def("__repr__", [](const WeightedPair& p) {
        std::ostringstream os;
        os << "WeightedPair(" << p.target << ", " << p.context << ", " << p.weight << ")";
        return os.str();
      });

  py::class_<PairSet>(m, "PairSet")
      .def_readonly("pairs", &PairSet::pairs)
      .def_readonly("contexts", &PairSet::contexts)
      .def_readonly("skipped", &PairSet::skipped)
      .def("__len__", [](const PairSet& p) { return p.pairs.size(); });

  m.def("window_pairs", [](const std::vector<std::vector<std::string>>& s, const Vocabulary& vocab, int window,
                           bool dynamic, double subsample, std::uint64_t seed) {
    return extract_window_pairs(to_sentences(s), vocab, WindowOptions{window, dynamic, subsample, seed});
  }, py::arg("sentences"), py::arg("vocab"), py::arg("window") = 5, py::arg("dynamic") = true,
        py::arg("subsample") = 0.0, py::arg("seed") = 1);

  m.def("dep_pairs", [](const std::filesystem::path& conllu, const Vocabulary& vocab, std::uint64_t ctx_min_count) {
    return extract_dep_pairs(load_conllu(conllu).sentences, vocab, ctx_min_count);
  }, py::arg("conllu"), py::arg("vocab"), py::arg("ctx_min_count") = 100);

  m.def("load_tokenized", [](const std::filesystem::path& path) {
    std::vector<std::vector<std::string>> out;
    for (auto& s : load_tokenized(path).sentences) out.push_back(std::move(s.tokens));
    return out;
  });

  py::class_<NGramLM>(m, "NGramLM")
      .def_static("train", [](const std::vector<std::vector<std::string>>& s, const Vocabulary& vocab, int order,
                              std::optional<double> discount) {
        return NGramLM::train(to_sentences(s), vocab, order,
                              discount ? DiscountSpec::fixed(*discount) : DiscountSpec::estimate());
      }, py::arg("sentences"), py::arg("vocab"), py::arg("order") = 4, py::arg("discount") = 0.75)
      .def_static("load", &NGramLM::load)
      .def("save", &NGramLM::save)
      .def_property_readonly("order", &NGramLM::order)
      .def_property_readonly("discounts", &NGramLM::discounts)
      .def("logprob", [](const NGramLM& lm, const std::string& w, const std::vector<std::string>& h) {
        return lm.logprob(w, h);
      }, py::arg("word"), py::arg("history"))
      .def("prob", [](const NGramLM& lm, const std::string& w, const std::vector<std::string>& h) {
        std::vector<WordId> ids;
        for (const auto& t : h) ids.push_back(lm.token_id(t));
        return lm.prob(lm.token_id(w), ids);
      }, py::arg("word"), py::arg("history"))
      .def("substitutes", [](const NGramLM& lm, const std::vector<std::string>& sentence, std::size_t pos,
                             std::size_t k) {
        if (pos >= sentence.size()) throw py::index_error("position out of range");
        const auto ids = lm.encode(TokenizedSentence{sentence});
        return named(substitutes(lm, ids, pos, k), lm.vocabulary());
      }, py::arg("sentence"), py::arg("position"), py::arg("k") = 10);

  m.def("sub_pairs", [](const NGramLM& lm, const std::vector<std::vector<std::string>>& s, std::size_t k,
                        std::size_t cap, std::uint64_t seed, unsigned workers) {
    const auto vectors = generate_substitutes(lm, to_sentences(s), k, workers);
    return extract_sub_pairs(vectors, lm.vocabulary(), cap, seed);
  }, py::arg("lm"), py::arg("sentences"), py::arg("k") = 10, py::arg("cap") = 20000, py::arg("seed") = 1,
        py::arg("workers") = 1);

  py::class_<EmbeddingSet>(m, "EmbeddingSet")
      .def(py::init<std::vector<std::string>, Matrix>(), py::arg("words"), py::arg("vectors"))
      .def_static("load", &EmbeddingSet::load)
      .def("save", &EmbeddingSet::save)
      .def("__len__", &EmbeddingSet::size)
      .def("__contains__", &EmbeddingSet::contains)
      .def_property_readonly("dim", &EmbeddingSet::dim)
      .def_property_readonly("words", &EmbeddingSet::words)
      .def_property_readonly("vectors", &EmbeddingSet::vectors)
      .def("__getitem__", [](const EmbeddingSet& e, const std::string& w) -> Vector {
        const auto i = e.find(w);
        if (!i) throw py::key_error(w);
        return e.row(*i);
      })
      .def("normalized", &EmbeddingSet::normalized)
      .def("neighbors", &nearest_neighbors, py::arg("word"), py::arg("n") = 5);

  m.def("run_name", &run_name, py::arg("tag"), py::arg("dim"));

  m.def("train", [](const PairSet& set, const Vocabulary& vocab, std::size_t dim, int negatives, int epochs,
                    double lr, std::uint64_t seed, unsigned workers) {
    TrainConfig cfg;
    cfg.dim = dim;
    cfg.negatives = negatives;
    cfg.epochs = epochs;
    cfg.initial_lr = lr;
    cfg.seed = seed;
    cfg.workers = workers;
    TrainResult r;
    {
      py::gil_scoped_release release;
      r = train(set.pairs, vocab, set.contexts, cfg);
    }
    return py::make_tuple(r.targets, r.contexts);
  }, py::arg("pairs"), py::arg("vocab"), py::arg("dim") = 100, py::arg("negatives") = 5, py::arg("epochs") = 3,
        py::arg("lr") = 0.025, py::arg("seed") = 1, py::arg("workers") = 1,
        "Returns (target embeddings, context embeddings).");

  m.def("concat", &concat);
  m.def("svd", [](const EmbeddingSet& e, std::size_t k, double power, bool center) {
    return svd_reduce(e, k, power, center).embeddings;
  }, py::arg("embeddings"), py::arg("k"), py::arg("power") = 1.0, py::arg("center") = true);

  py::class_<CcaModel>(m, "CcaModel")
      .def_static("load", &CcaModel::load)
      .def("save", &CcaModel::save)
      .def_readonly("correlations", &CcaModel::correlations)
      .def_readonly("proj_x", &CcaModel::proj_x)
      .def_readonly("proj_y", &CcaModel::proj_y)
      .def("apply", [](const CcaModel& model, const EmbeddingSet& e, const std::string& view) {
        return cca_apply(model, e, parse_view(view));
      }, py::arg("embeddings"), py::arg("view") = "x");
  m.def("cca", py::overload_cast<const EmbeddingSet&, const EmbeddingSet&, std::size_t, double, double>(&cca_fit),
        py::arg("a"), py::arg("b"), py::arg("k"), py::arg("reg_x") = 1e-4, py::arg("reg_y") = 1e-4);

  m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); });
  m.def("cosine", py::overload_cast<const Vector&, const Vector&>(&cosine));
  m.def("eval_wordsim", [](const EmbeddingSet& e, const std::filesystem::path& pairs) {
    const auto s = eval_wordpairs(e, WordPairDataset::load(pairs));
    return py::dict(py::arg("spearman") = s.spearman, py::arg("coverage") = s.coverage,
                    py::arg("n_used") = s.n_used, py::arg("n_total") = s.n_total);
  }, py::arg("embeddings"), py::arg("pairs"));
  m.def("eval_toefl", [](const EmbeddingSet& e, const std::filesystem::path& items) {
    const auto s = eval_toefl(e, load_toefl(items));
    return py::dict(py::arg("correct") = s.correct, py::arg("answered") = s.answered, py::arg("total") = s.total,
                    py::arg("accuracy_covered") = s.accuracy_covered, py::arg("accuracy_all") = s.accuracy_all);
  }, py::arg("embeddings"), py::arg("items"));

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = cli_main(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs one ctxemb command; returns (exit status, stdout, stderr).");
}
