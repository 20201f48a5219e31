"""Standalone lexicon classifier: the same file format and scoring rule as
the client-side toolkit, implemented independently so conformance between
the two is a real check."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Lexicon:
    labels: tuple[str, ...]
    weights: dict[str, tuple[float, ...]]
    bias: tuple[float, ...]


def load_lexicon(path: str) -> Lexicon:
    """First line: tab-separated labels; then word<TAB>per-label scores;
    an optional __bias__ line carries biases."""
    with open(path, encoding="utf-8") as fh:
        lines = [line.rstrip("\n") for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"empty lexicon file: {path}")
    labels = tuple(lines[0].split("\t"))
    weights: dict[str, tuple[float, ...]] = {}
    bias = (0.0,) * len(labels)
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != len(labels) + 1:
            raise ValueError(f"{path}:{lineno}: expected {len(labels) + 1} columns")
        vec = tuple(float(x) for x in parts[1:])
        if parts[0] == "__bias__":
            bias = vec
        else:
            weights[parts[0]] = vec
    return Lexicon(labels=labels, weights=weights, bias=bias)


def score(lexicon: Lexicon, text: str) -> dict[str, float]:
    """Whitespace-tokenized additive scores through a softmax.

    Accumulation follows token order and the softmax subtracts the max
    before exponentiation, so results are reproducible to the last bit.
    """
    scores = list(lexicon.bias)
    for token in text.split():
        vec = lexicon.weights.get(token)
        if vec is not None:
            for i, w in enumerate(vec):
                scores[i] += w
    m = max(scores)
    exps = [math.exp(s - m) for s in scores]
    total = math.fsum(exps)
    return {label: e / total for label, e in zip(lexicon.labels, exps)}


def predict(lexicon: Lexicon, text: str) -> tuple[str, dict[str, float]]:
    """Label (highest probability, ties to the lexicographically first) plus
    the full distribution."""
    probs = score(lexicon, text)
    best = max(probs.values())
    label = min(lab for lab, p in probs.items() if p == best)
    return label, probs
