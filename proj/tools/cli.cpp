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

#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ctxemb/combine.hpp"
#include "ctxemb/contexts.hpp"
#include "ctxemb/corpus.hpp"
#include "ctxemb/embedding.hpp"
#include "ctxemb/eval.hpp"
#include "ctxemb/io.hpp"
#include "ctxemb/lm.hpp"
#include "ctxemb/pipeline.hpp"
#include "ctxemb/sgns.hpp"

namespace fs = std::filesystem;

namespace ctxemb {

namespace {

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  std::string str() const {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << seconds() << "s";
    return os.str();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Resolved configuration of the subcommand that produced `output`, written as
// a section that --config accepts back.
void dump_config(const CLI::App& cmd, const fs::path& output) {
  std::string section;
  for (const CLI::App* a = &cmd; a->get_parent() != nullptr; a = a->get_parent()) {
    section = section.empty() ? a->get_name() : a->get_name() + "." + section;
  }
  fs::path path = output;
  path += ".config";
  const auto text = cmd.config_to_str(true, false);
  write_atomically(path, [&](std::ostream& out) { out << '[' << section << "]\n" << text; });
}

std::vector<TokenizedSentence> read_corpus(const fs::path& path, const std::string& format) {
  if (format == "conllu") {
    auto parsed = load_conllu(path);
    std::vector<TokenizedSentence> out;
    out.reserve(parsed.sentences.size());
    for (const auto& s : parsed.sentences) out.push_back(to_tokenized(s));
    return out;
  }
  return load_tokenized(path).sentences;
}

DiscountSpec parse_discount(const std::string& text) {
  if (text == "estimate" || text == "estimated") return DiscountSpec::estimate();
  DiscountSpec spec;
  for (auto field : split(text, ',')) spec.per_level.push_back(parse_double(trim(field)));
  return spec;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void write_pairs_file(const fs::path& path, const PairSet& set, const Vocabulary& words) {
  write_atomically(path, [&](std::ostream& out) { write_pairs(out, set.pairs, words, set.contexts); });
}

// Options without a captured default and without a value requirement say so
// in their help text, so --help accounts for every flag.
void mark_unset_defaults(CLI::App& app) {
  for (auto* opt : app.get_options()) {
    if (opt->get_name() == "--help" || opt->get_required() || !opt->get_default_str().empty()) continue;
    const auto& desc = opt->get_description();
    if (desc.find("(default:") != std::string::npos) continue;
    opt->description(desc + " (default: none)");
  }
  for (auto* sub : app.get_subcommands({})) mark_unset_defaults(*sub);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ctxemb: skip-gram embeddings from window, dependency and substitute contexts"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Key-value (TOML/INI) config file; command-line flags override it");

  // vocab
  struct {
    std::string corpus, format = "text", output;
    std::uint64_t min_count = 100;
  } vocab_opt;
  auto* vocab_cmd = app.add_subcommand("vocab", "Count a corpus and write word<TAB>count by id");
  vocab_cmd->add_option("--corpus", vocab_opt.corpus, "Tokenized text or CoNLL-U corpus")
      ->required()->check(CLI::ExistingFile);
  vocab_cmd->add_option("--format", vocab_opt.format, "Corpus format")
      ->check(CLI::IsMember({"text", "conllu"}));
  vocab_cmd->add_option("--min-count", vocab_opt.min_count, "Drop words rarer than this")
      ->check(CLI::PositiveNumber);
  vocab_cmd->add_option("--output", vocab_opt.output, "Vocabulary file")->required();

  // shuffle
  struct {
    std::string input, format = "text", output;
    std::uint64_t seed = 1;
  } shuffle_opt;
  auto* shuffle_cmd = app.add_subcommand("shuffle", "Deterministically permute corpus sentences");
  shuffle_cmd->add_option("--input", shuffle_opt.input, "Corpus to shuffle")
      ->required()->check(CLI::ExistingFile);
  shuffle_cmd->add_option("--format", shuffle_opt.format, "Corpus format")
      ->check(CLI::IsMember({"text", "conllu"}));
  shuffle_cmd->add_option("--seed", shuffle_opt.seed, "Permutation seed");
  shuffle_cmd->add_option("--output", shuffle_opt.output, "Shuffled corpus")->required();

  // pairs
  auto* pairs_cmd = app.add_subcommand("pairs", "Extract target/context pairs");
  pairs_cmd->require_subcommand(1);
  struct {
    std::string corpus, vocab, output, ctx_vocab_out;
    int window = 5;
    bool dynamic = true;
    double subsample = 0.0;
    std::uint64_t seed = 1;
  } win_opt;
  auto* win_cmd = pairs_cmd->add_subcommand("window", "Window contexts from a tokenized corpus");
  win_cmd->add_option("--corpus", win_opt.corpus, "Tokenized corpus")->required()->check(CLI::ExistingFile);
  win_cmd->add_option("--vocab", win_opt.vocab, "Word vocabulary")->required()->check(CLI::ExistingFile);
  win_cmd->add_option("--window", win_opt.window, "Maximum distance to a context word")
      ->check(CLI::PositiveNumber);
  win_cmd->add_flag("--dynamic,!--no-dynamic", win_opt.dynamic,
                    "Shrink the window uniformly at random per position")
      ->default_str("true");
  win_cmd->add_option("--subsample", win_opt.subsample, "Frequent-word subsampling threshold (0 = off)")
      ->check(CLI::NonNegativeNumber);
  win_cmd->add_option("--seed", win_opt.seed, "Random seed");
  win_cmd->add_option("--output", win_opt.output, "Pair file")->required();
  win_cmd->add_option("--ctx-vocab-out", win_opt.ctx_vocab_out, "Context vocabulary file")->required();

  struct {
    std::string parses, vocab, output, ctx_vocab_out;
    std::uint64_t ctx_min_count = 100;
  } dep_opt;
  auto* dep_cmd = pairs_cmd->add_subcommand("dep", "Dependency contexts from a CoNLL-U corpus");
  dep_cmd->add_option("--parses", dep_opt.parses, "CoNLL-U corpus")->required()->check(CLI::ExistingFile);
  dep_cmd->add_option("--vocab", dep_opt.vocab, "Word vocabulary")->required()->check(CLI::ExistingFile);
  dep_cmd->add_option("--ctx-min-count", dep_opt.ctx_min_count,
                      "Drop context strings rarer than this (use the vocab --min-count)")
      ->check(CLI::PositiveNumber);
  dep_cmd->add_option("--output", dep_opt.output, "Pair file")->required();
  dep_cmd->add_option("--ctx-vocab-out", dep_opt.ctx_vocab_out, "Context vocabulary file")->required();

  struct {
    std::string corpus, vocab, substitutes, output, ctx_vocab_out;
    std::size_t cap = 20000;
    std::uint64_t seed = 1;
  } sub_opt;
  auto* sub_cmd = pairs_cmd->add_subcommand("sub", "Weighted substitute contexts");
  sub_cmd->add_option("--corpus", sub_opt.corpus, "Tokenized corpus the substitutes were generated from")
      ->required()->check(CLI::ExistingFile);
  sub_cmd->add_option("--vocab", sub_opt.vocab, "Word vocabulary")->required()->check(CLI::ExistingFile);
  sub_cmd->add_option("--substitutes", sub_opt.substitutes, "Substitute vector file")
      ->required()->check(CLI::ExistingFile);
  sub_cmd->add_option("--cap", sub_opt.cap, "Maximum substitute vectors per target type")
      ->check(CLI::PositiveNumber);
  sub_cmd->add_option("--seed", sub_opt.seed, "Reservoir sampling seed");
  sub_cmd->add_option("--output", sub_opt.output, "Pair file")->required();
  sub_cmd->add_option("--ctx-vocab-out", sub_opt.ctx_vocab_out, "Context vocabulary file")->required();

  // substitutes
  struct {
    std::string corpus, vocab, output, lm, save_lm, discount = "0.75";
    int order = 4;
    std::size_t k = 10;
    unsigned workers = 1;
  } subs_opt;
  auto* subs_cmd = app.add_subcommand("substitutes", "Generate top-k substitute vectors with a Kneser-Ney LM");
  subs_cmd->add_option("--corpus", subs_opt.corpus, "Tokenized corpus")->required()->check(CLI::ExistingFile);
  subs_cmd->add_option("--vocab", subs_opt.vocab, "Word vocabulary")->required()->check(CLI::ExistingFile);
  subs_cmd->add_option("--order", subs_opt.order, "N-gram order")->check(CLI::Range(1, NGramLM::kMaxOrder));
  subs_cmd->add_option("--discount", subs_opt.discount,
                       "KN discount: one value, one per level (comma separated), or 'estimate'");
  subs_cmd->add_option("--k", subs_opt.k, "Substitutes kept per occurrence")->check(CLI::PositiveNumber);
  subs_cmd->add_option("--workers", subs_opt.workers, "Worker threads")->check(CLI::PositiveNumber);
  subs_cmd->add_option("--lm", subs_opt.lm, "Load this model instead of training one")
      ->check(CLI::ExistingFile);
  subs_cmd->add_option("--save-lm", subs_opt.save_lm, "Write the trained model here");
  subs_cmd->add_option("--output", subs_opt.output, "Substitute vector file")->required();

  // train
  struct {
    std::string pairs, vocab, ctx_vocab, output, out_dir, tag, contexts_output;
    TrainConfig config;
  } train_opt;
  auto* train_cmd = app.add_subcommand("train", "Train skip-gram negative sampling embeddings on a pair file");
  train_cmd->add_option("--pairs", train_opt.pairs, "Pair file")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--vocab", train_opt.vocab, "Word vocabulary")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--ctx-vocab", train_opt.ctx_vocab, "Context vocabulary")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--dim", train_opt.config.dim, "Embedding dimensionality")->check(CLI::PositiveNumber);
  train_cmd->add_option("--negatives", train_opt.config.negatives, "Negative samples per pair")
      ->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--epochs", train_opt.config.epochs, "Passes over the pairs")->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train_opt.config.initial_lr, "Initial learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--table-exponent", train_opt.config.table_exponent,
                        "Exponent of the negative sampling distribution");
  train_cmd->add_option("--seed", train_opt.config.seed, "Random seed");
  train_cmd->add_option("--workers", train_opt.config.workers, "Worker threads (1 = reproducible)")
      ->check(CLI::PositiveNumber);
  auto* train_out = train_cmd->add_option("--output", train_opt.output, "Embedding file");
  auto* train_dir = train_cmd->add_option("--out-dir", train_opt.out_dir,
                                          "Directory for <tag>-<dim>.vec when --output is not given");
  train_cmd->add_option("--tag", train_opt.tag, "Run tag such as W5, DEP or SUB")->needs(train_dir);
  train_dir->excludes(train_out);
  train_cmd->add_option("--contexts-output", train_opt.contexts_output, "Also write context embeddings");

  // combine
  auto* combine_cmd = app.add_subcommand("combine", "Combine two embedding sets");
  combine_cmd->require_subcommand(1);
  struct {
    std::string a, b, output;
  } concat_opt;
  auto* concat_cmd = combine_cmd->add_subcommand("concat", "Concatenate rows over the shared vocabulary");
  concat_cmd->add_option("--a", concat_opt.a, "First embedding file")->required()->check(CLI::ExistingFile);
  concat_cmd->add_option("--b", concat_opt.b, "Second embedding file")->required()->check(CLI::ExistingFile);
  concat_cmd->add_option("--output", concat_opt.output, "Combined embedding file")->required();

  struct {
    std::string input, output;
    std::size_t k = 100;
    double power = 1.0;
    bool center = true, normalize = false;
  } svd_opt;
  auto* svd_cmd = combine_cmd->add_subcommand("svd", "Reduce dimensionality with a truncated SVD");
  svd_cmd->add_option("--input", svd_opt.input, "Embedding file (usually a concatenation)")
      ->required()->check(CLI::ExistingFile);
  svd_cmd->add_option("--k", svd_opt.k, "Output dimensionality")->check(CLI::PositiveNumber);
  svd_cmd->add_option("--power", svd_opt.power, "Exponent on the singular values")->check(CLI::Range(0.0, 1.0));
  svd_cmd->add_flag("--center,!--no-center", svd_opt.center, "Subtract column means first")->default_str("true");
  svd_cmd->add_flag("--normalize", svd_opt.normalize, "Length-normalize rows first")->default_str("false");
  svd_cmd->add_option("--output", svd_opt.output, "Reduced embedding file")->required();

  struct {
    std::string a, b, output, model_out, report, benchmark, view = "x";
    std::size_t k = 100;
    double reg = 1e-4;
    std::vector<std::size_t> k_grid;
    std::vector<double> reg_grid;
    bool normalize = false;
  } cca_opt;
  auto* cca_cmd = combine_cmd->add_subcommand("cca", "Project two views with linear CCA");
  cca_cmd->add_option("--a", cca_opt.a, "View x embedding file")->required()->check(CLI::ExistingFile);
  cca_cmd->add_option("--b", cca_opt.b, "View y embedding file")->required()->check(CLI::ExistingFile);
  cca_cmd->add_option("--k", cca_opt.k, "Projection dimensionality")->check(CLI::PositiveNumber);
  cca_cmd->add_option("--reg", cca_opt.reg, "Ridge added to both covariance matrices")
      ->check(CLI::NonNegativeNumber);
  auto* bench = cca_cmd->add_option("--benchmark", cca_opt.benchmark,
                                    "Word-pair file; enables grid tuning over --k-grid x --reg-grid")
                    ->check(CLI::ExistingFile);
  cca_cmd->add_option("--k-grid", cca_opt.k_grid, "Comma-separated k values")->delimiter(',')->needs(bench);
  cca_cmd->add_option("--reg-grid", cca_opt.reg_grid, "Comma-separated regularizers")->delimiter(',')->needs(bench);
  cca_cmd->add_option("--view", cca_opt.view, "Projected view written as output")
      ->check(CLI::IsMember({"x", "y"}));
  cca_cmd->add_flag("--normalize", cca_opt.normalize, "Length-normalize rows first")->default_str("false");
  cca_cmd->add_option("--model-out", cca_opt.model_out, "Write the fitted model");
  cca_cmd->add_option("--report", cca_opt.report, "Tuning report TSV");
  cca_cmd->add_option("--output", cca_opt.output, "Projected embedding file")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate embeddings");
  eval_cmd->require_subcommand(1);
  struct {
    std::string embeddings, report;
    std::vector<std::string> pairs;
  } ws_opt;
  auto* ws_cmd = eval_cmd->add_subcommand("wordsim", "Spearman correlation on word-pair benchmarks");
  ws_cmd->add_option("--embeddings", ws_opt.embeddings, "Embedding file")->required()->check(CLI::ExistingFile);
  ws_cmd->add_option("--pairs", ws_opt.pairs, "One or more word-pair files")->required()->check(CLI::ExistingFile);
  ws_cmd->add_option("--report", ws_opt.report, "Report TSV");

  struct {
    std::string embeddings, items, report;
  } toefl_opt;
  auto* toefl_cmd = eval_cmd->add_subcommand("toefl", "Synonym selection accuracy");
  toefl_cmd->add_option("--embeddings", toefl_opt.embeddings, "Embedding file")->required()->check(CLI::ExistingFile);
  toefl_cmd->add_option("--items", toefl_opt.items, "TOEFL item file")->required()->check(CLI::ExistingFile);
  toefl_cmd->add_option("--report", toefl_opt.report, "Report TSV");

  struct {
    std::string embeddings, train, test, report;
    LogisticOptions lr;
  } senti_opt;
  auto* senti_cmd = eval_cmd->add_subcommand("senti", "Averaged-embedding logistic regression sentiment");
  senti_cmd->add_option("--embeddings", senti_opt.embeddings, "Embedding file")->required()->check(CLI::ExistingFile);
  senti_cmd->add_option("--train", senti_opt.train, "Training sentences")->required()->check(CLI::ExistingFile);
  senti_cmd->add_option("--test", senti_opt.test, "Evaluation sentences")->required()->check(CLI::ExistingFile);
  senti_cmd->add_option("--l2", senti_opt.lr.l2, "L2 penalty")->check(CLI::NonNegativeNumber);
  senti_cmd->add_option("--max-iter", senti_opt.lr.max_iter, "Gradient descent iterations")->check(CLI::PositiveNumber);
  senti_cmd->add_option("--tol", senti_opt.lr.tol, "Gradient norm stopping threshold")->check(CLI::PositiveNumber);
  senti_cmd->add_option("--report", senti_opt.report, "Report TSV");

  struct {
    std::string embeddings, report;
    std::vector<std::string> words;
    std::size_t n = 5;
  } nn_opt;
  auto* nn_cmd = eval_cmd->add_subcommand("neighbors", "Nearest neighbors by cosine");
  nn_cmd->add_option("--embeddings", nn_opt.embeddings, "Embedding file")->required()->check(CLI::ExistingFile);
  nn_cmd->add_option("--word", nn_opt.words, "Query word (repeatable)")->required();
  nn_cmd->add_option("--n", nn_opt.n, "Neighbors per query")->check(CLI::PositiveNumber);
  nn_cmd->add_option("--report", nn_opt.report, "Report TSV");

  mark_unset_defaults(app);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const Stopwatch clock;
    if (vocab_cmd->parsed()) {
      const auto corpus = read_corpus(vocab_opt.corpus, vocab_opt.format);
      const auto vocab = build_vocab(corpus, vocab_opt.min_count);
      vocab.save(vocab_opt.output);
      dump_config(*vocab_cmd, vocab_opt.output);
      out << "vocab: " << vocab.size() << " words (min_count " << vocab_opt.min_count << ") from "
          << vocab.total_tokens() << " tokens -> " << vocab_opt.output << " [" << clock.str() << "]\n";
    } else if (shuffle_cmd->parsed()) {
      std::size_t n = 0;
      if (shuffle_opt.format == "conllu") {
        auto parsed = load_conllu(shuffle_opt.input);
        auto shuffled = shuffle_sentences(std::move(parsed.sentences), shuffle_opt.seed);
        n = shuffled.size();
        write_atomically(shuffle_opt.output, [&](std::ostream& o) { write_conllu(o, shuffled); });
      } else {
        auto corpus = load_tokenized(shuffle_opt.input);
        auto shuffled = shuffle_sentences(std::move(corpus.sentences), shuffle_opt.seed);
        n = shuffled.size();
        write_atomically(shuffle_opt.output, [&](std::ostream& o) { write_tokenized(o, shuffled); });
      }
      dump_config(*shuffle_cmd, shuffle_opt.output);
      out << "shuffle: " << n << " sentences -> " << shuffle_opt.output << " [" << clock.str() << "]\n";
    } else if (win_cmd->parsed()) {
      const auto corpus = load_tokenized(win_opt.corpus).sentences;
      const auto vocab = Vocabulary::load(win_opt.vocab);
      const auto set = extract_window_pairs(
          corpus, vocab, WindowOptions{win_opt.window, win_opt.dynamic, win_opt.subsample, win_opt.seed});
      write_pairs_file(win_opt.output, set, vocab);
      set.contexts.save(win_opt.ctx_vocab_out);
      dump_config(*win_cmd, win_opt.output);
      out << "pairs window: " << set.pairs.size() << " pairs from " << corpus.size() << " sentences -> "
          << win_opt.output << " [" << clock.str() << "]\n";
    } else if (dep_cmd->parsed()) {
      const auto parsed = load_conllu(dep_opt.parses);
      for (const auto& d : parsed.diagnostics) err << "warning: rejected sentence at " << d << '\n';
      const auto vocab = Vocabulary::load(dep_opt.vocab);
      const auto set = extract_dep_pairs(parsed.sentences, vocab, dep_opt.ctx_min_count);
      write_pairs_file(dep_opt.output, set, vocab);
      set.contexts.save(dep_opt.ctx_vocab_out);
      dump_config(*dep_cmd, dep_opt.output);
      out << "pairs dep: " << set.pairs.size() << " pairs, " << set.contexts.size() << " contexts, "
          << set.skipped << " skipped, " << parsed.rejected << " rejected sentences -> " << dep_opt.output
          << " [" << clock.str() << "]\n";
    } else if (sub_cmd->parsed()) {
      const auto corpus = load_tokenized(sub_opt.corpus).sentences;
      const auto vocab = Vocabulary::load(sub_opt.vocab);
      auto in = open_input(sub_opt.substitutes);
      const auto vectors = read_substitutes(in, sub_opt.substitutes, vocab, corpus);
      const auto set = extract_sub_pairs(vectors, vocab, sub_opt.cap, sub_opt.seed);
      write_pairs_file(sub_opt.output, set, vocab);
      set.contexts.save(sub_opt.ctx_vocab_out);
      dump_config(*sub_cmd, sub_opt.output);
      out << "pairs sub: " << set.pairs.size() << " weighted pairs from " << vectors.size()
          << " substitute vectors -> " << sub_opt.output << " [" << clock.str() << "]\n";
    } else if (subs_cmd->parsed()) {
      const auto corpus = load_tokenized(subs_opt.corpus).sentences;
      const auto vocab = Vocabulary::load(subs_opt.vocab);
      const auto lm = subs_opt.lm.empty()
                          ? NGramLM::train(corpus, vocab, subs_opt.order, parse_discount(subs_opt.discount))
                          : NGramLM::load(subs_opt.lm);
      if (lm.vocabulary().words() != vocab.words()) {
        throw std::invalid_argument("language model vocabulary differs from " + subs_opt.vocab);
      }
      if (!subs_opt.save_lm.empty()) lm.save(subs_opt.save_lm);
      const auto vectors = generate_substitutes(lm, corpus, subs_opt.k, subs_opt.workers);
      write_atomically(subs_opt.output, [&](std::ostream& o) { write_substitutes(o, vectors, vocab); });
      dump_config(*subs_cmd, subs_opt.output);
      out << "substitutes: " << vectors.size() << " vectors (order " << lm.order() << ", k " << subs_opt.k
          << ") -> " << subs_opt.output << " [" << clock.str() << "]\n";
    } else if (train_cmd->parsed()) {
      const auto vocab = Vocabulary::load(train_opt.vocab);
      const auto ctx = Vocabulary::load(train_opt.ctx_vocab);
      auto in = open_input(train_opt.pairs);
      const auto pairs = read_pairs(in, train_opt.pairs, vocab, ctx);
      fs::path output = train_opt.output;
      if (output.empty()) {
        if (train_opt.out_dir.empty()) throw std::invalid_argument("give --output or --out-dir");
        const std::string tag = train_opt.tag.empty() ? "EMB" : train_opt.tag;
        output = fs::path(train_opt.out_dir) / (run_name(tag, train_opt.config.dim) + ".vec");
      }
      const auto result = train(pairs, vocab, ctx, train_opt.config);
      result.targets.save(output);
      if (!train_opt.contexts_output.empty()) result.contexts.save(train_opt.contexts_output);
      dump_config(*train_cmd, output);
      out << "train: " << vocab.size() << " x " << train_opt.config.dim << " from " << pairs.size()
          << " pairs, " << train_opt.config.epochs << " epochs -> " << output.string() << " ["
          << clock.str() << "]\n";
    } else if (concat_cmd->parsed()) {
      const auto combined = concat(EmbeddingSet::load(concat_opt.a), EmbeddingSet::load(concat_opt.b));
      combined.save(concat_opt.output);
      dump_config(*concat_cmd, concat_opt.output);
      out << "combine concat: " << combined.size() << " x " << combined.dim() << " -> " << concat_opt.output
          << " [" << clock.str() << "]\n";
    } else if (svd_cmd->parsed()) {
      auto input = EmbeddingSet::load(svd_opt.input);
      if (svd_opt.normalize) input = input.normalized();
      const auto reduced = svd_reduce(input, svd_opt.k, svd_opt.power, svd_opt.center);
      if (reduced.rank_deficient) {
        err << "warning: k = " << svd_opt.k << " exceeds rank " << reduced.rank
            << "; trailing columns are zero\n";
      }
      reduced.embeddings.save(svd_opt.output);
      dump_config(*svd_cmd, svd_opt.output);
      out << "combine svd: " << reduced.embeddings.size() << " x " << svd_opt.k << " (rank " << reduced.rank
          << ") -> " << svd_opt.output << " [" << clock.str() << "]\n";
    } else if (cca_cmd->parsed()) {
      auto a = EmbeddingSet::load(cca_opt.a);
      auto b = EmbeddingSet::load(cca_opt.b);
      if (cca_opt.normalize) {
        a = a.normalized();
        b = b.normalized();
      }
      CcaModel model;
      if (!cca_opt.benchmark.empty()) {
        std::vector<std::size_t> ks = cca_opt.k_grid.empty() ? std::vector<std::size_t>{cca_opt.k} : cca_opt.k_grid;
        std::vector<double> regs = cca_opt.reg_grid.empty() ? std::vector<double>{cca_opt.reg} : cca_opt.reg_grid;
        auto tuning = tune_cca(a, b, WordPairDataset::load(cca_opt.benchmark), ks, regs);
        model = std::move(tuning.model);
        const auto& best = tuning.report[tuning.best];
        out << "combine cca: tuned k " << best.k << ", reg " << fmt(best.reg) << ", spearman "
            << fmt(best.spearman) << " over " << tuning.report.size() << " cells\n";
        if (!cca_opt.report.empty()) {
          write_atomically(cca_opt.report, [&](std::ostream& o) { write_tuning_report(o, tuning.report); });
        }
      } else {
        model = cca_fit(a, b, cca_opt.k, cca_opt.reg, cca_opt.reg);
      }
      const auto [xa, xb] = align(a, b);
      const auto projected = cca_opt.view == "x" ? cca_apply(model, xa, CcaView::X) : cca_apply(model, xb, CcaView::Y);
      projected.save(cca_opt.output);
      if (!cca_opt.model_out.empty()) model.save(cca_opt.model_out);
      dump_config(*cca_cmd, cca_opt.output);
      out << "combine cca: " << projected.size() << " x " << model.k() << ", top correlation "
          << fmt(model.correlations.front()) << " -> " << cca_opt.output << " [" << clock.str() << "]\n";
    } else if (ws_cmd->parsed()) {
      const auto e = EmbeddingSet::load(ws_opt.embeddings);
      std::ostringstream report;
      report << "dataset\tspearman\tcoverage\tn_used\tn_total\n";
      for (const auto& path : ws_opt.pairs) {
        const auto score = eval_wordpairs(e, WordPairDataset::load(path));
        const auto name = fs::path(path).filename().string();
        report << name << '\t' << format_double(score.spearman) << '\t' << format_double(score.coverage) << '\t'
               << score.n_used << '\t' << score.n_total << '\n';
        out << "wordsim " << name << ": spearman " << fmt(score.spearman) << " over " << score.n_used << "/"
            << score.n_total << " pairs\n";
      }
      if (!ws_opt.report.empty()) {
        write_atomically(ws_opt.report, [&](std::ostream& o) { o << report.str(); });
        dump_config(*ws_cmd, ws_opt.report);
      }
    } else if (toefl_cmd->parsed()) {
      const auto e = EmbeddingSet::load(toefl_opt.embeddings);
      const auto s = eval_toefl(e, load_toefl(toefl_opt.items));
      out << "toefl: " << s.correct << "/" << s.answered << " answered correctly (" << s.total
          << " items); accuracy " << fmt(s.accuracy_covered) << " covered, " << fmt(s.accuracy_all)
          << " overall\n";
      if (!toefl_opt.report.empty()) {
        write_atomically(toefl_opt.report, [&](std::ostream& o) {
          o << "total\tanswered\tcorrect\taccuracy_covered\taccuracy_all\tcoverage\n"
            << s.total << '\t' << s.answered << '\t' << s.correct << '\t' << format_double(s.accuracy_covered)
            << '\t' << format_double(s.accuracy_all) << '\t' << format_double(s.coverage) << '\n';
        });
        dump_config(*toefl_cmd, toefl_opt.report);
      }
    } else if (senti_cmd->parsed()) {
      const auto e = EmbeddingSet::load(senti_opt.embeddings);
      const auto train_set = load_sentiment(senti_opt.train);
      const auto test_set = load_sentiment(senti_opt.test);
      std::size_t oov_train = 0, oov_test = 0;
      const auto xtr = senti_featurize(e, train_set, &oov_train);
      const auto xte = senti_featurize(e, test_set, &oov_test);
      std::vector<int> ytr, yte;
      for (const auto& s : train_set) ytr.push_back(s.label);
      for (const auto& s : test_set) yte.push_back(s.label);
      if (oov_train + oov_test) {
        err << "warning: " << oov_train + oov_test << " sentences had no known words\n";
      }
      const auto fit = senti_train(xtr, ytr, senti_opt.lr);
      const double train_acc = senti_eval(fit.model, xtr, ytr);
      const double test_acc = senti_eval(fit.model, xte, yte);
      out << "senti: train accuracy " << fmt(train_acc) << ", test accuracy " << fmt(test_acc) << " ("
          << fit.iterations << " iterations" << (fit.converged ? ", converged" : "") << ")\n";
      if (!senti_opt.report.empty()) {
        write_atomically(senti_opt.report, [&](std::ostream& o) {
          o << "train_accuracy\ttest_accuracy\titerations\tconverged\n"
            << format_double(train_acc) << '\t' << format_double(test_acc) << '\t' << fit.iterations << '\t'
            << (fit.converged ? 1 : 0) << '\n';
        });
        dump_config(*senti_cmd, senti_opt.report);
      }
    } else if (nn_cmd->parsed()) {
      const auto e = EmbeddingSet::load(nn_opt.embeddings);
      std::ostringstream report;
      report << "query\trank\tneighbor\tcosine\n";
      for (const auto& w : nn_opt.words) {
        const auto nn = nearest_neighbors(e, to_lower(w), nn_opt.n);
        out << w << ':';
        for (std::size_t i = 0; i < nn.size(); ++i) {
          out << ' ' << nn[i].first << " (" << fmt(nn[i].second) << ")";
          report << w << '\t' << i + 1 << '\t' << nn[i].first << '\t' << format_double(nn[i].second) << '\n';
        }
        out << '\n';
      }
      if (!nn_opt.report.empty()) {
        write_atomically(nn_opt.report, [&](std::ostream& o) { o << report.str(); });
        dump_config(*nn_cmd, nn_opt.report);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ctxemb
