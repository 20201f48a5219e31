"""The attack loop: iteratively select a word, rewrite the selected set
vertically, and query the feedback classifier until it changes its mind or a
budget runs out."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .core import AttackConfig, AttackOutcome, Document, InvalidInputError, Verdict
from .gateway import ClassifierHandle, GatewayError, QueryLedger, classify
from .selection import select_word
from .transform import transform_text

_SEED_MIX = 0x9E3779B97F4A7C15  # odd 64-bit constant; decorrelates per-iteration chaff streams


@dataclass(frozen=True)
class IterationRecord:
    selected_index: int
    drop: float
    verdict_after_transform: Verdict


@dataclass(frozen=True)
class AttackTrace:
    """Everything observed during one attack, for reports and debugging."""

    anchor_label: str
    original_verdict: Verdict
    iterations: tuple[IterationRecord, ...] = ()
    gold_mismatch: bool = False


@dataclass
class _Budget:
    ledger: QueryLedger
    start_count: int
    started: float
    max_queries: int
    max_seconds: float

    @property
    def queries_used(self) -> int:
        return self.ledger.count - self.start_count

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started

    def exhausted(self) -> bool:
        return self.queries_used >= self.max_queries or self.elapsed >= self.max_seconds


def _iteration_seed(base_seed: int, iteration: int) -> int:
    return (base_seed * _SEED_MIX + iteration) % 2**64


def attack(doc: Document, feedback: ClassifierHandle, config: AttackConfig,
           ledger: QueryLedger | None = None) -> tuple[AttackOutcome, AttackTrace]:
    """Run the full attack on one document.

    The anchor is the feedback classifier's prediction on the pristine text.
    Documents the classifier already gets wrong (against a known gold label)
    are not attacked. Each iteration scores removals on the ORIGINAL word
    sequence, grows the selected set by one, rewrites the whole set together,
    and checks the feedback classifier on the candidate. On any failure the
    outcome carries the original raw text untouched.
    """
    if not any(doc.attackable):
        raise InvalidInputError("document has no attackable words")
    if ledger is None:
        ledger = QueryLedger()
    budget = _Budget(ledger=ledger, start_count=ledger.count, started=time.monotonic(),
                     max_queries=config.max_queries, max_seconds=config.max_seconds)

    original_verdict = classify(feedback, doc.raw, ledger)
    anchor = original_verdict.label
    if doc.gold_label is not None and anchor != doc.gold_label:
        outcome = AttackOutcome(success=False, perturbed_text=doc.raw,
                                queries_used=budget.queries_used,
                                elapsed_seconds=budget.elapsed)
        return outcome, AttackTrace(anchor_label=anchor, original_verdict=original_verdict,
                                    gold_mismatch=True)

    joined = " ".join(doc.words)
    if joined == doc.raw:
        score_orig = original_verdict.distribution.probs[anchor]
    else:
        score_orig = classify(feedback, joined, ledger).distribution.probs[anchor]

    if config.success_criterion == "beat_gold" and doc.gold_label is None:
        raise InvalidInputError("beat_gold success criterion requires a gold label")
    target_label = doc.gold_label if config.success_criterion == "beat_gold" else anchor

    selected: set[int] = set()
    iterations: list[IterationRecord] = []
    success_text: str | None = None
    iteration = 0
    try:
        while not budget.exhausted():
            result = select_word(doc, selected, feedback, ledger, anchor, score_orig=score_orig)
            if result is None:
                break
            selected.add(result.index)
            iteration += 1
            candidate = transform_text(doc.words, selected, config.width,
                                       chaff_p=config.chaff_p,
                                       rng_seed=_iteration_seed(config.rng_seed, iteration))
            verdict = classify(feedback, candidate, ledger)
            iterations.append(IterationRecord(result.index, result.drop, verdict))
            if verdict.label != target_label:
                success_text = candidate
                break
    except GatewayError as exc:
        exc.partial_trace = AttackTrace(  # type: ignore[attr-defined]
            anchor_label=anchor, original_verdict=original_verdict,
            iterations=tuple(iterations))
        raise

    trace = AttackTrace(anchor_label=anchor, original_verdict=original_verdict,
                        iterations=tuple(iterations))
    if success_text is None:
        outcome = AttackOutcome(success=False, perturbed_text=doc.raw,
                                queries_used=budget.queries_used,
                                elapsed_seconds=budget.elapsed)
    else:
        outcome = AttackOutcome(success=True, perturbed_text=success_text,
                                selected=frozenset(selected),
                                queries_used=budget.queries_used,
                                elapsed_seconds=budget.elapsed,
                                perturbed_fraction=len(selected) / len(doc.words))
    return outcome, trace
