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
"""Python bindings for the ctxemb library and command-line tool."""

from ctxemb._core import (
    CcaModel,
    EmbeddingSet,
    NGramLM,
    PairSet,
    Vocabulary,
    WeightedPair,
    cca,
    concat,
    cosine,
    dep_pairs,
    eval_toefl,
    eval_wordsim,
    load_tokenized,
    run_cli,
    run_name,
    spearman,
    sub_pairs,
    svd,
    train,
    window_pairs,
)

__all__ = [
    "CcaModel",
    "EmbeddingSet",
    "NGramLM",
    "PairSet",
    "Vocabulary",
    "WeightedPair",
    "cca",
    "concat",
    "cosine",
    "dep_pairs",
    "eval_toefl",
    "eval_wordsim",
    "load_tokenized",
    "run_cli",
    "run_name",
    "spearman",
    "sub_pairs",
    "svd",
    "train",
    "window_pairs",
]
