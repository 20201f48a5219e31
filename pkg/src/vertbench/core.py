"""Shared value types: documents, label distributions, verdicts, attack config."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


class InvalidInputError(ValueError):
    """Raised when an operation receives arguments violating its contract."""


PROB_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Document:
    """A text plus its whitespace tokenization and per-word attackable mask.

    Words are the maximal runs of non-whitespace characters of ``raw``, in
    order. ``attackable`` marks which word positions an attack may rewrite.
    """

    raw: str
    words: tuple[str, ...]
    attackable: tuple[bool, ...]
    gold_label: str | None = None

    def __post_init__(self) -> None:
        if self.words != tuple(self.raw.split()):
            raise InvalidInputError("words must equal the whitespace tokenization of raw")
        if len(self.attackable) != len(self.words):
            raise InvalidInputError("attackable mask must have one entry per word")

    @property
    def attackable_indices(self) -> tuple[int, ...]:
        return tuple(i for i, ok in enumerate(self.attackable) if ok)


def tokenize(text: str, gold_label: str | None = None) -> Document:
    """Split ``text`` on runs of Unicode whitespace into an all-attackable Document."""
    words = tuple(text.split())
    return Document(raw=text, words=words, attackable=(True,) * len(words), gold_label=gold_label)


def make_pair_document(premise: str, hypothesis: str, gold_label: str | None = None) -> Document:
    """Join a premise and hypothesis with a newline; only hypothesis words are attackable.

    The premise is carried along so classifiers see the full combined text,
    but its word positions are masked off from attack.
    """
    if not premise.strip() or not hypothesis.strip():
        raise InvalidInputError("premise and hypothesis must both be non-empty")
    raw = premise + "\n" + hypothesis
    n_premise = len(premise.split())
    n_hyp = len(hypothesis.split())
    mask = (False,) * n_premise + (True,) * n_hyp
    return Document(raw=raw, words=tuple(raw.split()), attackable=mask, gold_label=gold_label)


@dataclass(frozen=True)
class LabelDistribution:
    """A probability distribution over classifier labels."""

    probs: dict[str, float]

    def __post_init__(self) -> None:
        if not self.probs:
            raise InvalidInputError("distribution must contain at least one label")
        for label, p in self.probs.items():
            if not (-PROB_SUM_TOL <= p <= 1.0 + PROB_SUM_TOL):
                raise InvalidInputError(f"probability for {label!r} out of [0,1]: {p}")
        total = math.fsum(self.probs.values())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise InvalidInputError(f"probabilities sum to {total}, expected 1")

    def argmax_label(self) -> str:
        """The highest-probability label; exact ties go to the lexicographically first."""
        best = max(self.probs.values())
        return min(label for label, p in self.probs.items() if p == best)

    def __getitem__(self, label: str) -> float:
        return self.probs[label]


@dataclass(frozen=True)
class Verdict:
    """A classifier's answer: predicted label plus the full distribution."""

    label: str
    distribution: LabelDistribution

    def __post_init__(self) -> None:
        if self.label not in self.distribution.probs:
            raise InvalidInputError(f"label {self.label!r} absent from distribution")
        best = max(self.distribution.probs.values())
        # Tolerance absorbs decimal round-trips of remote responses; verdicts
        # built locally via from_distribution are exact argmaxes.
        if self.distribution.probs[self.label] < best - PROB_SUM_TOL:
            raise InvalidInputError(f"label {self.label!r} is not an argmax of the distribution")

    @classmethod
    def from_distribution(cls, distribution: LabelDistribution) -> Verdict:
        return cls(label=distribution.argmax_label(), distribution=distribution)


SUCCESS_CRITERIA = ("flip_prediction", "beat_gold")


@dataclass(frozen=True)
class AttackConfig:
    """Knobs for one attack run.

    width limits how many words are verticalized per chunk; chaff_p is the
    per-cell probability of replacing an eligible padding space with a random
    letter; budgets cap classifier queries and wall-clock time.
    """

    width: int = 10
    chaff_p: float = 0.0
    max_queries: int = 5000
    max_seconds: float = 60.0
    rng_seed: int = 0
    success_criterion: str = "flip_prediction"

    def __post_init__(self) -> None:
        if self.width < 1:
            raise InvalidInputError("width must be >= 1")
        if not 0.0 <= self.chaff_p <= 1.0:
            raise InvalidInputError("chaff_p must be in [0, 1]")
        if self.max_queries < 1:
            raise InvalidInputError("max_queries must be >= 1")
        if self.max_seconds <= 0:
            raise InvalidInputError("max_seconds must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise InvalidInputError("rng_seed must fit in 64 unsigned bits")
        if self.success_criterion not in SUCCESS_CRITERIA:
            raise InvalidInputError(f"success_criterion must be one of {SUCCESS_CRITERIA}")


@dataclass(frozen=True)
class AttackOutcome:
    """Result of one attack: the rewritten text (or the original on failure) and accounting."""

    success: bool
    perturbed_text: str
    selected: frozenset[int] = field(default_factory=frozenset)
    queries_used: int = 0
    elapsed_seconds: float = 0.0
    perturbed_fraction: float = 0.0
