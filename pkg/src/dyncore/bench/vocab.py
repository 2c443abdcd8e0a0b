"""Token vocabulary with a frequency threshold; rare tokens collapse to UNK."""

from __future__ import annotations

from collections import Counter

from ..errors import DataError

UNK = "<unk>"


class Vocab:
    def __init__(self, tokens: list[str], threshold: int):
        self.i2t = tokens
        self.t2i = {t: i for i, t in enumerate(tokens)}
        self.threshold = threshold

    @classmethod
    def build(cls, corpus_tokens, unk_threshold: int = 1, specials: tuple[str, ...] = ()) -> "Vocab":
        """UNK always sits at id 0; specials follow; kept tokens (corpus
        frequency >= unk_threshold) keep first-occurrence order."""
        order: list[str] = []
        counts: Counter = Counter()
        for tok in corpus_tokens:
            if tok not in counts:
                order.append(tok)
            counts[tok] += 1
        if not counts:
            raise DataError("empty corpus: no tokens to build a vocabulary from")
        tokens = [UNK, *specials]
        reserved = set(tokens)
        tokens.extend(t for t in order if counts[t] >= unk_threshold and t not in reserved)
        return cls(tokens, unk_threshold)

    def id(self, token: str) -> int:
        return self.t2i.get(token, 0)

    def known(self, token: str) -> bool:
        """True when the token kept its own embedding (met the threshold)."""
        return token in self.t2i

    def __len__(self) -> int:
        return len(self.i2t)
