"""Classifier-side countermeasures: whitespace normalization, unigram
dynamic-programming re-segmentation, and reconstruction of vertically
written words."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .core import InvalidInputError

DEFAULT_MAX_WORD_LEN = 24
_ALNUM = frozenset("abcdefghijklmnopqrstuvwxyz0123456789")

DEFENSE_METHODS = ("none", "simple", "segment", "reverse")


def normalize_simple(text: str) -> str:
    """Collapse every whitespace run (newlines included) to a single space."""
    return " ".join(text.split())


@dataclass(frozen=True)
class UnigramTable:
    """Word frequencies backing the segmenter."""

    counts: dict[str, int]
    total: int = 0
    max_word_len: int = DEFAULT_MAX_WORD_LEN

    def __post_init__(self) -> None:
        if self.max_word_len < 1:
            raise InvalidInputError("max_word_len must be positive")
        for word, count in self.counts.items():
            if count <= 0:
                raise InvalidInputError(f"non-positive count for {word!r}")
            if not word or not set(word) <= _ALNUM:
                raise InvalidInputError(f"table word must be lowercase alphanumeric: {word!r}")
        if self.total == 0:
            object.__setattr__(self, "total", sum(self.counts.values()))

    def logscore(self, word: str) -> float:
        """Log-probability of a candidate word; unseen words pay a length penalty."""
        count = self.counts.get(word)
        if count is not None:
            return math.log(count / self.total)
        return -math.log(self.total) - (len(word) - 1) * math.log(10.0)


def load_unigrams(path: str) -> UnigramTable:
    """Read ``word<TAB>count`` lines; non-positive counts are rejected."""
    counts: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            word, sep, raw_count = line.partition("\t")
            if not sep:
                raise InvalidInputError(f"{path}:{lineno}: expected word<TAB>count")
            try:
                count = int(raw_count)
            except ValueError as exc:
                raise InvalidInputError(f"{path}:{lineno}: non-integer count {raw_count!r}") from exc
            if count <= 0:
                raise InvalidInputError(f"{path}:{lineno}: non-positive count for {word!r}")
            counts[word] = count
    if not counts:
        raise InvalidInputError(f"empty unigram table: {path}")
    return UnigramTable(counts=counts)


@lru_cache(maxsize=1)
def default_unigram_table() -> UnigramTable:
    """The ~10k-word table shipped with the package."""
    ref = resources.files("vertbench").joinpath("data/unigrams.tsv")
    counts: dict[str, int] = {}
    for line in ref.read_text(encoding="utf-8").splitlines():
        if line:
            word, _, raw_count = line.partition("\t")
            counts[word] = int(raw_count)
    return UnigramTable(counts=counts)


def strip_to_alnum(text: str) -> str:
    """Lowercase and keep only [a-z0-9]."""
    return "".join(ch for ch in text.lower() if ch in _ALNUM)


def segment(text: str, table: UnigramTable) -> str:
    """Strip the text to lowercase alphanumerics and re-split it into the
    maximum-likelihood word sequence under the unigram table.

    Dynamic program over end positions; the last-word start position with the
    best cumulative score wins, lowest start on ties.
    """
    if not table.counts:
        raise InvalidInputError("unigram table must be non-empty")
    stripped = strip_to_alnum(text)
    n = len(stripped)
    if n == 0:
        return ""
    best_score = [0.0] * (n + 1)
    prev = [0] * (n + 1)
    for end in range(1, n + 1):
        best: float | None = None
        best_start = end - 1
        for start in range(max(0, end - table.max_word_len), end):
            score = best_score[start] + table.logscore(stripped[start:end])
            if best is None or score > best:
                best = score
                best_start = start
        best_score[end] = best if best is not None else float("-inf")
        prev[end] = best_start
    words = []
    end = n
    while end > 0:
        start = prev[end]
        words.append(stripped[start:end])
        end = start
    return " ".join(reversed(words))


@dataclass
class _Column:
    start: int
    chars: list[str] = field(default_factory=list)


def _tokens_with_columns(line: str) -> list[tuple[int, str]]:
    tokens = []
    col = 0
    n = len(line)
    while col < n:
        if line[col].isspace():
            col += 1
            continue
        start = col
        while col < n and not line[col].isspace():
            col += 1
        tokens.append((start, line[start:col]))
    return tokens


def reverse(text: str) -> str:
    """Reassemble vertically written words back into a flat line.

    Lines carrying a token longer than one character start a new top line;
    so does any line whose length differs from the current block, since a
    chunk is rectangular and a genuine continuation row keeps its width.
    Remaining lines are vertical rows: each character is appended to the
    column it sits in — exact start-column match first, otherwise the
    nearest column to the left, otherwise a new column (chaff robustness).
    Finished top lines are flushed in column order.
    """
    out_words: list[str] = []
    columns: list[_Column] = []
    block_width: int | None = None

    def flush() -> None:
        out_words.extend("".join(col.chars) for col in columns if col.chars)

    for line in text.split("\n"):
        tokens = _tokens_with_columns(line)
        is_top = (
            block_width is None
            or len(line) != block_width
            or any(len(tok) > 1 for _, tok in tokens)
        )
        if is_top:
            flush()
            columns = [_Column(start=c, chars=[tok]) for c, tok in tokens]
            block_width = len(line)
            continue
        for c, ch in tokens:
            placed = False
            for col in columns:
                if col.start == c:
                    col.chars.append(ch)
                    placed = True
                    break
            if not placed:
                left = [col for col in columns if col.start <= c]
                if left:
                    max(left, key=lambda col: col.start).chars.append(ch)
                else:
                    columns.insert(0, _Column(start=c, chars=[ch]))
    flush()
    return " ".join(out_words)


def make_defense(method: str, table: UnigramTable | None = None):
    """A text->text callable for one of the named defenses."""
    if method == "none":
        return lambda text: text
    if method == "simple":
        return normalize_simple
    if method == "segment":
        resolved = table or default_unigram_table()
        return lambda text: segment(text, resolved)
    if method == "reverse":
        return reverse
    raise InvalidInputError(f"unknown defense {method!r}; expected one of {DEFENSE_METHODS}")
