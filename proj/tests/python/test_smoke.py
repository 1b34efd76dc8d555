#  Copyright 2026 The ctxemb Authors. All Rights Reserved.
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
"""Writes the bundled toy corpus, its UD parses and small benchmark fixtures."""

import math
from pathlib import Path

import numpy as np
import pytest

import ctxemb

TOY = Path(__file__).resolve().parents[2] / "data" / "toy"


@pytest.fixture(scope="module")
def corpus():
    return ctxemb.load_tokenized(TOY / "toy.txt")


@pytest.fixture(scope="module")
def vocab(corpus):
    return ctxemb.Vocabulary.build(corpus, 5)


def test_vocabulary(vocab):
    assert len(vocab) > 20
    assert "cat" in vocab
    assert vocab.word(vocab.find("cat")) == "cat"
    counts = vocab.counts
    assert counts == sorted(counts, reverse=True)


def test_bigram_closed_form():
    sents = [["a", "b"]] * 10
    lm = ctxemb.NGramLM.train(sents, ctxemb.Vocabulary.build(sents), order=2, discount=0.75)
    assert lm.prob("b", ["a"]) == pytest.approx(121 / 128, abs=1e-12)
    total = sum(lm.prob(w, ["a"]) for w in ["a", "b", "<unk>", "</s>"])
    assert total == pytest.approx(1.0, abs=1e-12)


def test_substitutes_normalized(corpus, vocab):
    lm = ctxemb.NGramLM.train(corpus, vocab, order=3)
    subs = lm.substitutes(corpus[0], 1, k=5)
    assert len(subs) == 5
    assert sum(p for _, p in subs) == pytest.approx(1.0)
    assert [p for _, p in subs] == sorted((p for _, p in subs), reverse=True)


def test_window_train_eval(corpus, vocab, tmp_path):
    pairs = ctxemb.window_pairs(corpus, vocab, window=2, dynamic=False)
    assert len(pairs) > 0
    targets, contexts = ctxemb.train(pairs, vocab, dim=10, epochs=1, seed=3)
    assert targets.vectors.shape == (len(vocab), 10)
    assert np.isfinite(targets.vectors).all()
    again, _ = ctxemb.train(pairs, vocab, dim=10, epochs=1, seed=3)
    assert np.array_equal(targets.vectors, again.vectors)
    out = tmp_path / "w2.vec"
    targets.save(out)
    loaded = ctxemb.EmbeddingSet.load(out)
    assert np.array_equal(loaded.vectors, targets.vectors)
    score = ctxemb.eval_wordsim(targets, TOY / "wordsim.tsv")
    assert score["n_used"] <= score["n_total"]


def test_dep_pairs(vocab):
    pairs = ctxemb.dep_pairs(TOY / "toy.conllu", vocab, ctx_min_count=5)
    assert any("/prep_" in w for w in pairs.contexts.words)


def test_combination():
    rng = np.random.default_rng(0)
    words = [f"w{i}" for i in range(30)]
    a = ctxemb.EmbeddingSet(words, rng.standard_normal((30, 6)))
    b = ctxemb.EmbeddingSet(words[5:], rng.standard_normal((25, 4)))
    both = ctxemb.concat(a, b)
    assert len(both) == 25 and both.dim == 10
    reduced = ctxemb.svd(a, 6, center=False)
    np.testing.assert_allclose(reduced.vectors @ reduced.vectors.T, a.vectors @ a.vectors.T, atol=1e-9)
    model = ctxemb.cca(a, ctxemb.EmbeddingSet(words, a.vectors @ np.eye(6)[::-1]), 3)
    assert all(abs(r - 1) < 1e-3 for r in model.correlations)
    assert model.apply(a, "x").dim == 3


def test_spearman():
    assert ctxemb.spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
    assert ctxemb.spearman([1, 1, 1], [1, 2, 3]) is None
    assert math.isclose(ctxemb.cosine(np.array([1.0, 0.0]), np.array([0.0, 2.0])), 0.0, abs_tol=1e-15)


def test_cli_roundtrip(tmp_path):
    out = tmp_path / "vocab.tsv"
    code, stdout, _ = ctxemb.run_cli(["vocab", "--corpus", str(TOY / "toy.txt"), "--min-count", "5",
                                      "--output", str(out)])
    assert code == 0 and out.exists()
    assert len(ctxemb.Vocabulary.load(out)) > 20
    code, _, stderr = ctxemb.run_cli(["vocab", "--corpus", str(tmp_path / "missing.txt"), "--output", str(out)])
    assert code != 0 and "missing.txt" in stderr
