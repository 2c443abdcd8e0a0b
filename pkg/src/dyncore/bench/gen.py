"""Deterministic synthetic corpora: desk-scale stand-ins for the real datasets.

Every generator is a pure function of (seed, sizes), so the same call writes
byte-identical files. Each task's data carries a learnable, noiseless signal:
cyclic next-token structure (rnnlm), tag determined by the word suffix
(tagger), tree labels counting marked leaves (treelstm), label determined by
the first word (pairclass), and class-revealing prefixes (earlystop).
"""

from __future__ import annotations

import random

from ..errors import DataError

SUFFIXES = ("ing", "ed", "ly", "er")


def _write(path: str, lines: list[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def gen_rnnlm(seed: int, train_path: str, dev_path: str, sentences: int = 200, vocab: int = 10,
              dev_sentences: int | None = None) -> None:
    def sentence(i: int) -> str:
        start = (i + seed) % vocab
        length = 8 + (i % 9)
        return " ".join(f"w{(start + j) % vocab}" for j in range(length))

    n_dev = dev_sentences if dev_sentences is not None else max(1, sentences // 5)
    _write(train_path, [sentence(i) for i in range(sentences)])
    _write(dev_path, [sentence(sentences + i) for i in range(n_dev)])


def _tagger_sentence(rng: random.Random, stems: int, rare_rate: float, rare_counter: list[int]) -> list[str]:
    lines = []
    for _ in range(6 + rng.randrange(7)):
        k = rng.randrange(len(SUFFIXES))
        if rare_rate > 0.0 and rng.random() < rare_rate:
            stem = f"rare{rare_counter[0]}"
            rare_counter[0] += 1
        else:
            stem = f"st{rng.randrange(stems)}"
        lines.append(f"{stem}{SUFFIXES[k]}\tT{k}")
    return lines


def gen_tagger(seed: int, train_path: str, dev_path: str, sentences: int = 500, stems: int = 20,
               rare_rate: float = 0.0, dev_sentences: int | None = None) -> None:
    rng = random.Random(seed)
    rare_counter = [0]

    def block(n: int) -> list[str]:
        out: list[str] = []
        for _ in range(n):
            out.extend(_tagger_sentence(rng, stems, rare_rate, rare_counter))
            out.append("")
        return out[:-1]  # no trailing blank line

    n_dev = dev_sentences if dev_sentences is not None else max(1, sentences // 5)
    _write(train_path, block(sentences))
    _write(dev_path, block(n_dev))


def _random_tree(rng: random.Random, leaves: int, vocab: int, labels: int) -> tuple[str, int]:
    """Returns (s-expression, count of marked leaves). A node's label is its
    marked-leaf count mod the label arity; tokens w0..w{vocab/2-1} are marked."""
    if leaves == 1:
        tok_idx = rng.randrange(vocab)
        marked = 1 if tok_idx < vocab // 2 else 0
        return f"({marked % labels} w{tok_idx})", marked
    left_n = rng.randrange(1, leaves)
    left, lm = _random_tree(rng, left_n, vocab, labels)
    right, rm = _random_tree(rng, leaves - left_n, vocab, labels)
    marked = lm + rm
    return f"({marked % labels} {left} {right})", marked


def gen_treelstm(seed: int, train_path: str, dev_path: str, sentences: int = 20, vocab: int = 10,
                 labels: int = 5, dev_sentences: int | None = None) -> None:
    rng = random.Random(seed)

    def block(n: int) -> list[str]:
        return [_random_tree(rng, 4 + rng.randrange(5), vocab, labels)[0] for _ in range(n)]

    n_dev = dev_sentences if dev_sentences is not None else max(1, sentences // 2)
    _write(train_path, block(sentences))
    _write(dev_path, block(n_dev))


def gen_pairclass(seed: int, train_path: str, dev_path: str, sentences: int = 300, vocab: int = 20,
                  classes: int = 4, dev_sentences: int | None = None) -> None:
    rng = random.Random(seed)

    def line() -> str:
        w1 = rng.randrange(vocab)
        w2 = rng.randrange(vocab)
        return f"w{w1} w{w2} {w1 % classes}"  # label is a function of word1 alone

    n_dev = dev_sentences if dev_sentences is not None else max(1, sentences // 5)
    _write(train_path, [line() for _ in range(sentences)])
    _write(dev_path, [line() for _ in range(n_dev)])


def gen_earlystop(seed: int, train_path: str, dev_path: str, sentences: int = 200,
                  dev_sentences: int | None = None) -> None:
    rng = random.Random(seed)

    def line() -> str:
        label = 1 if rng.random() < 0.5 else -1
        prefix_vocab = "p" if label == 1 else "n"
        words = [f"{prefix_vocab}{rng.randrange(5)}" for _ in range(3)]
        words += [f"x{rng.randrange(20)}" for _ in range(12)]
        return " ".join(words) + f" {label}"

    n_dev = dev_sentences if dev_sentences is not None else max(1, sentences // 4)
    _write(train_path, [line() for _ in range(sentences)])
    _write(dev_path, [line() for _ in range(n_dev)])


GENERATORS = {
    "rnnlm": gen_rnnlm,
    "tagger": gen_tagger,
    "tagger-char": lambda seed, train, dev, **kw: gen_tagger(seed, train, dev, rare_rate=kw.pop("rare_rate", 0.3), **kw),
    "treelstm": gen_treelstm,
    "pairclass": gen_pairclass,
    "earlystop": gen_earlystop,
}


def generate(task: str, seed: int, train_path: str, dev_path: str, **sizes) -> None:
    if task not in GENERATORS:
        raise DataError(f"no generator for task {task!r}")
    GENERATORS[task](seed, train_path, dev_path, **sizes)
