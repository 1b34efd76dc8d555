#!/usr/bin/env python3
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

import argparse
import os
import random

TOPICS = {
    "animals": {
        "nouns": ["cat", "dog", "lion", "tiger", "horse", "cow", "bird", "wolf"],
        "verbs": ["chases", "sees", "hunts", "feeds"],
        "places": ["barn", "forest", "field", "zoo"],
    },
    "tech": {
        "nouns": ["computer", "phone", "server", "laptop", "router", "printer", "tablet", "modem"],
        "verbs": ["runs", "updates", "installs", "reboots"],
        "places": ["office", "lab", "datacenter", "shop"],
    },
}
POSITIVE = ["good", "great"]
NEGATIVE = ["bad", "awful"]
OWNERS = ["owner", "friend", "keeper"]


def sentence(rng, topic):
    t = TOPICS[topic]
    adj = rng.choice(POSITIVE + NEGATIVE)
    n1, n2 = rng.choice(t["nouns"]), rng.choice(t["nouns"])
    verb = rng.choice(t["verbs"])
    kind = rng.randrange(3)
    # rows: (form, head, deprel); heads are 1-based, 0 = root
    if kind == 0:
        rows = [("the", 3, "det"), (adj, 3, "amod"), (n1, 4, "nsubj"), (verb, 0, "root"),
                ("the", 6, "det"), (n2, 4, "obj"), (".", 4, "punct")]
    elif kind == 1:
        place = rng.choice(t["places"])
        rows = [("the", 3, "det"), (adj, 3, "amod"), (n1, 4, "nsubj"), (verb, 0, "root"),
                ("the", 6, "det"), (n2, 4, "obj"), ("in", 9, "case"), ("the", 9, "det"),
                (place, 4, "obl"), (".", 4, "punct")]
    else:
        owner = rng.choice(OWNERS)
        rows = [("the", 2, "det"), (owner, 6, "nsubj"), ("of", 5, "case"), ("the", 5, "det"),
                (n1, 2, "nmod"), (verb, 0, "root"), ("the", 9, "det"), (adj, 9, "amod"),
                (n2, 6, "obj"), (".", 6, "punct")]
    return rows, adj in POSITIVE


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "toy"))
    ap.add_argument("--sentences", type=int, default=1200)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    os.makedirs(args.out, exist_ok=True)

    corpus = []
    for i in range(args.sentences):
        corpus.append(sentence(rng, "animals" if i % 2 == 0 else "tech"))

    with open(os.path.join(args.out, "toy.txt"), "w") as f:
        for rows, _ in corpus:
            f.write(" ".join(r[0] for r in rows) + "\n")
    with open(os.path.join(args.out, "toy.conllu"), "w") as f:
        for rows, _ in corpus:
            for i, (form, head, rel) in enumerate(rows, 1):
                f.write(f"{i}\t{form}\t{form}\t_\t_\t_\t{head}\t{rel}\t_\t_\n")
            f.write("\n")

    an, tn = TOPICS["animals"]["nouns"], TOPICS["tech"]["nouns"]
    with open(os.path.join(args.out, "wordsim.tsv"), "w") as f:
        f.write("# word1\tword2\tscore\n")
        for a, b, s in [(an[0], an[1], 8.5), (an[2], an[3], 9.0), (an[4], an[5], 7.5), (tn[0], tn[3], 9.2),
                        (tn[1], tn[6], 8.8), (tn[2], tn[4], 7.9), (an[0], tn[0], 1.2), (an[1], tn[1], 0.8),
                        (an[6], tn[5], 1.5), ("good", "great", 8.0), ("bad", "awful", 8.3),
                        ("good", "bad", 3.0), ("barn", "field", 6.0), ("office", "lab", 6.5),
                        ("barn", "server", 0.5)]:
            f.write(f"{a}\t{b}\t{s}\n")
    with open(os.path.join(args.out, "toefl.tsv"), "w") as f:
        f.write(f"{an[0]}\t{tn[0]}\t{an[1]}\t{tn[1]}\toffice\t1\n")
        f.write(f"{tn[2]}\t{an[2]}\tbarn\t{tn[4]}\t{an[3]}\t2\n")
        f.write(f"great\tbad\tgood\tawful\tlab\t1\n")
        f.write(f"lion\tprinter\tmodem\ttiger\tlab\t2\n")
        f.write(f"office\tfield\tlab\tforest\tzoo\t1\n")

    def senti(path, n, seed):
        r = random.Random(seed)
        with open(path, "w") as f:
            for i in range(n):
                rows, positive = sentence(r, "animals" if i % 3 else "tech")
                f.write(f"{int(positive)}\t{' '.join(x[0] for x in rows)}\n")

    senti(os.path.join(args.out, "senti_train.tsv"), 200, args.seed + 1)
    senti(os.path.join(args.out, "senti_test.tsv"), 80, args.seed + 2)


if __name__ == "__main__":
    main()
