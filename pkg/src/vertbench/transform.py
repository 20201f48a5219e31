"""Vertical word rewriting: column-aligned grids, width-constrained chunking,
and chaff injection into eligible padding whitespace."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .core import InvalidInputError

WORD = "word"
VERTICAL = "vertical-char"
PAD = "pad"
SEPARATOR = "separator"


@dataclass(frozen=True)
class Cell:
    kind: str
    content: str


@dataclass(frozen=True)
class CharGrid:
    """Rectangular cell layout of one chunk: rows of word/vertical/pad/separator cells."""

    rows: tuple[tuple[Cell, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(row) for row in self.rows}
        if len(widths) > 1:
            raise InvalidInputError("all grid rows must have the same cell count")

    def lines(self) -> list[str]:
        return ["".join(cell.content for cell in row) for row in self.rows]


def chunk_grid(words: list[str] | tuple[str, ...], selected: set[int] | frozenset[int]) -> CharGrid:
    """Lay out one chunk: selected words become one-character columns, others
    keep row 0 and leave word-length padding below.

    Line count is the longest selected word (1 when nothing is selected).
    Cells are joined by single-space separators and never trimmed, so the
    grid is bit-exact rectangular.
    """
    if not words:
        raise InvalidInputError("chunk must contain at least one word")
    for i in selected:
        if not 0 <= i < len(words):
            raise InvalidInputError(f"selected index {i} out of range for {len(words)} words")
    n_lines = max((len(words[i]) for i in selected), default=1)
    rows = []
    for k in range(n_lines):
        row: list[Cell] = []
        for i, word in enumerate(words):
            if i > 0:
                row.append(Cell(SEPARATOR, " "))
            if i in selected:
                ch = word[k] if k < len(word) else " "
                row.append(Cell(VERTICAL, ch))
            elif k == 0:
                row.append(Cell(WORD, word))
            else:
                row.append(Cell(PAD, " " * len(word)))
        rows.append(tuple(row))
    return CharGrid(rows=tuple(rows))


def transform_chunk(words: list[str] | tuple[str, ...],
                    selected: set[int] | frozenset[int]) -> list[str]:
    """Render one chunk's grid to text lines (chunk-local selected indices)."""
    return chunk_grid(words, selected).lines()


def _chunks(words: tuple[str, ...] | list[str], selected: set[int] | frozenset[int],
            width: int) -> list[tuple[list[str], set[int]]]:
    if width < 1:
        raise InvalidInputError("width must be >= 1")
    for i in selected:
        if not 0 <= i < len(words):
            raise InvalidInputError(f"selected index {i} out of range for {len(words)} words")
    out = []
    for start in range(0, len(words), width):
        chunk_words = list(words[start:start + width])
        local = {i - start for i in selected if start <= i < start + width}
        out.append((chunk_words, local))
    return out


def transform(words: tuple[str, ...] | list[str], selected: set[int] | frozenset[int],
              width: int) -> str:
    """Rewrite the selected words vertically, processing ``width`` words per chunk.

    Selected indices are global word positions; each chunk's block of lines is
    newline-terminated and the blocks are concatenated in order.
    """
    blocks = []
    for chunk_words, local in _chunks(words, selected, width):
        blocks.extend(transform_chunk(chunk_words, local))
    return "".join(line + "\n" for line in blocks)


def eligible_chaff_positions(grid: CharGrid) -> list[tuple[int, int, int]]:
    """All (row, cell, offset) pad positions that chaff may fill.

    Pad cells exist only below row 0. A pad's boundary column is excluded
    when the neighboring content cell (looking past the one-space separator)
    is a vertical column: a letter there would read as part of the rewritten
    word. Separator and vertical cells are never eligible.
    """
    positions = []
    for r, row in enumerate(grid.rows):
        if r == 0:
            continue
        content_cells = [(c, cell) for c, cell in enumerate(row) if cell.kind != SEPARATOR]
        for pos, (c, cell) in enumerate(content_cells):
            if cell.kind != PAD:
                continue
            start = 0
            end = len(cell.content)
            if pos > 0 and content_cells[pos - 1][1].kind == VERTICAL:
                start = 1
            if pos + 1 < len(content_cells) and content_cells[pos + 1][1].kind == VERTICAL:
                end -= 1
            positions.extend((r, c, offset) for offset in range(start, end))
    return positions


def _inject_chaff_rng(grid: CharGrid, p: float, rng: random.Random) -> CharGrid:
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError("chaff probability must be in [0, 1]")
    if p == 0.0:
        return grid
    replacements: dict[tuple[int, int], list[str]] = {}
    for r, c, offset in eligible_chaff_positions(grid):
        if rng.random() < p:
            chars = replacements.setdefault((r, c), list(grid.rows[r][c].content))
            chars[offset] = rng.choice(string.ascii_lowercase)
    if not replacements:
        return grid
    rows = []
    for r, row in enumerate(grid.rows):
        new_row = []
        for c, cell in enumerate(row):
            chars = replacements.get((r, c))
            new_row.append(Cell(PAD, "".join(chars)) if chars else cell)
        rows.append(tuple(new_row))
    return CharGrid(rows=tuple(rows))


def inject_chaff(grid: CharGrid, p: float, rng_seed: int) -> CharGrid:
    """Replace each eligible pad space with a random lowercase letter at
    probability ``p``. Deterministic for a fixed seed."""
    return _inject_chaff_rng(grid, p, random.Random(rng_seed))


def transform_text(words: tuple[str, ...] | list[str], selected: set[int] | frozenset[int],
                   width: int, chaff_p: float = 0.0, rng_seed: int = 0) -> str:
    """transform() plus chaff: one seeded RNG stream drives all chunks in order."""
    rng = random.Random(rng_seed)
    blocks = []
    for chunk_words, local in _chunks(words, selected, width):
        grid = _inject_chaff_rng(chunk_grid(chunk_words, local), chaff_p, rng)
        blocks.extend(grid.lines())
    return "".join(line + "\n" for line in blocks)
