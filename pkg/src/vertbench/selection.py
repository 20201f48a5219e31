"""Greedy word-importance search: score each candidate word by the drop in
the anchor label's probability when that word is removed."""

from __future__ import annotations

from dataclasses import dataclass

from .core import Document
from .gateway import ClassifierHandle, QueryLedger, classify


@dataclass(frozen=True)
class SelectionResult:
    """The chosen word position, its drop, and the full per-position drop vector.

    ``all_drops`` has one entry per word; positions that were not candidates
    (non-attackable or excluded) hold None.
    """

    index: int
    drop: float
    all_drops: tuple[float | None, ...]


def removal_text(words: tuple[str, ...] | list[str], index: int) -> str:
    """The word sequence with one position removed, joined by single spaces."""
    return " ".join(w for i, w in enumerate(words) if i != index)


def select_word(doc: Document, excluded: set[int] | frozenset[int],
                feedback: ClassifierHandle, ledger: QueryLedger, anchor_label: str,
                score_orig: float | None = None) -> SelectionResult | None:
    """Pick the attackable word whose removal drops the anchor probability most.

    The baseline is the anchor probability on the full word sequence joined by
    single spaces; pass ``score_orig`` to reuse a value computed once per
    attack instead of re-querying. Ties go to the lowest index. When no
    removal produces a positive drop, the lowest-index remaining candidate is
    returned (with its non-positive drop) so the caller still makes progress.
    Returns None only when no candidates remain.
    """
    candidates = [i for i in doc.attackable_indices if i not in excluded]
    if not candidates:
        return None
    if score_orig is None:
        baseline = classify(feedback, " ".join(doc.words), ledger)
        score_orig = baseline.distribution.probs.get(anchor_label, 0.0)
    all_drops: list[float | None] = [None] * len(doc.words)
    best_index: int | None = None
    best_drop = 0.0
    for i in candidates:
        verdict = classify(feedback, removal_text(doc.words, i), ledger)
        drop = score_orig - verdict.distribution.probs.get(anchor_label, 0.0)
        all_drops[i] = drop
        if drop > best_drop:
            best_drop = drop
            best_index = i
    if best_index is None:
        best_index = candidates[0]
        best_drop = all_drops[best_index]  # type: ignore[assignment]
        assert best_drop is not None
    return SelectionResult(index=best_index, drop=best_drop, all_drops=tuple(all_drops))


def importance_profile(doc: Document, feedback: ClassifierHandle, ledger: QueryLedger,
                       anchor_label: str) -> list[float]:
    """Removal drops for every attackable position, in position order."""
    result = select_word(doc, frozenset(), feedback, ledger, anchor_label)
    if result is None:
        return []
    return [result.all_drops[i] for i in doc.attackable_indices]  # type: ignore[misc]
