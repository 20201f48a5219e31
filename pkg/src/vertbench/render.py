"""Deterministic monospace rendering of text into grayscale images and the
exact inverse via template matching, plus PGM file I/O."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .core import InvalidInputError

CELL = 8
INK = 0
BACKGROUND = 255
PRINTABLE = frozenset(chr(c) for c in range(0x20, 0x7F))


class RecognitionError(Exception):
    """An image cell matched no glyph; carries the cell coordinates."""

    def __init__(self, message: str, cell_row: int, cell_col: int) -> None:
        super().__init__(message)
        self.cell_row = cell_row
        self.cell_col = cell_col


@dataclass(frozen=True)
class GlyphFont:
    """8x8 binary bitmaps for the 95 printable ASCII characters.

    Each glyph is 8 row bytes, most significant bit = leftmost pixel. Space
    is the all-zero bitmap; every glyph is distinct so recognition is exact.
    """

    glyphs: dict[str, tuple[int, ...]]

    def __post_init__(self) -> None:
        missing = PRINTABLE - set(self.glyphs)
        if missing:
            raise InvalidInputError(f"font missing {len(missing)} printable glyphs")
        if self.glyphs[" "] != (0,) * CELL:
            raise InvalidInputError("space glyph must be the all-zero bitmap")
        seen: dict[tuple[int, ...], str] = {}
        for ch, rows in self.glyphs.items():
            if len(rows) != CELL or any(not 0 <= b <= 0xFF for b in rows):
                raise InvalidInputError(f"glyph {ch!r} must be 8 row bytes")
            if rows in seen:
                raise InvalidInputError(f"glyphs {seen[rows]!r} and {ch!r} share a bitmap")
            seen[rows] = ch


def load_font(path: str) -> GlyphFont:
    """Read ``<hex codepoint> <16 hex digits>`` lines into a font."""
    glyphs: dict[str, tuple[int, ...]] = {}
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code_hex, _, rows_hex = line.partition(" ")
        rows_hex = rows_hex.strip()
        if len(rows_hex) != 2 * CELL:
            raise InvalidInputError(f"glyph line needs {2 * CELL} hex digits: {line!r}")
        glyphs[chr(int(code_hex, 16))] = tuple(
            int(rows_hex[i: i + 2], 16) for i in range(0, 2 * CELL, 2)
        )
    return GlyphFont(glyphs=glyphs)


@lru_cache(maxsize=1)
def default_font() -> GlyphFont:
    ref = resources.files("vertbench").joinpath("data/font8x8.txt")
    glyphs: dict[str, tuple[int, ...]] = {}
    for line in ref.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        code_hex, _, rows_hex = line.partition(" ")
        rows_hex = rows_hex.strip()
        glyphs[chr(int(code_hex, 16))] = tuple(
            int(rows_hex[i: i + 2], 16) for i in range(0, 2 * CELL, 2)
        )
    return GlyphFont(glyphs=glyphs)


@dataclass(frozen=True)
class RasterImage:
    """Row-major grayscale pixels: 0 is ink, 255 background."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise InvalidInputError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise InvalidInputError("pixel buffer does not match dimensions")


def render(text: str, font: GlyphFont | None = None) -> RasterImage:
    """Rasterize each character into an 8x8 cell; shorter lines pad with spaces."""
    font = font or default_font()
    offset = 0
    for ch in text:
        if ch != "\n" and ch not in PRINTABLE:
            raise InvalidInputError(
                f"non-printable character U+{ord(ch):04X} at offset {offset}"
            )
        offset += 1
    lines = text.split("\n")
    width_chars = max(1, max(len(line) for line in lines))
    width = width_chars * CELL
    height = len(lines) * CELL
    pixels = bytearray([BACKGROUND]) * (width * height)
    for row, line in enumerate(lines):
        for col, ch in enumerate(line):
            rows = font.glyphs[ch]
            y0 = row * CELL
            x0 = col * CELL
            for dy, bits in enumerate(rows):
                if not bits:
                    continue
                base = (y0 + dy) * width + x0
                for dx in range(CELL):
                    if bits & (0x80 >> dx):
                        pixels[base + dx] = INK
    return RasterImage(width=width, height=height, pixels=bytes(pixels))


def unrender(image: RasterImage, font: GlyphFont | None = None) -> str:
    """Match every 8x8 cell exactly against the font and rebuild the text.

    Trailing space cells are trimmed per row; a cell matching no glyph raises
    RecognitionError with its coordinates.
    """
    font = font or default_font()
    if image.width % CELL or image.height % CELL:
        raise InvalidInputError("image dimensions must be multiples of 8")
    reverse_map = {rows: ch for ch, rows in font.glyphs.items()}
    cols = image.width // CELL
    rows_count = image.height // CELL
    lines = []
    for row in range(rows_count):
        chars = []
        for col in range(cols):
            bitmap = _cell_bitmap(image, row, col)
            ch = reverse_map.get(bitmap)
            if ch is None:
                raise RecognitionError(
                    f"cell ({row}, {col}) matches no glyph", cell_row=row, cell_col=col
                )
            chars.append(ch)
        lines.append("".join(chars).rstrip(" "))
    return "\n".join(lines)


def _cell_bitmap(image: RasterImage, cell_row: int, cell_col: int) -> tuple[int, ...]:
    rows = []
    x0 = cell_col * CELL
    for dy in range(CELL):
        base = (cell_row * CELL + dy) * image.width + x0
        bits = 0
        for dx in range(CELL):
            value = image.pixels[base + dx]
            if value == INK:
                bits |= 0x80 >> dx
            elif value != BACKGROUND:
                raise RecognitionError(
                    f"cell ({cell_row}, {cell_col}) holds a non-binary pixel {value}",
                    cell_row=cell_row, cell_col=cell_col,
                )
        rows.append(bits)
    return tuple(rows)


def write_pgm(image: RasterImage, path: str, binary: bool = False) -> None:
    """Write plain (P2) or binary (P5) PGM; P2 is the canonical test format."""
    if binary:
        with open(path, "wb") as fh:
            fh.write(f"P5\n{image.width} {image.height}\n255\n".encode("ascii"))
            fh.write(image.pixels)
        return
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"P2\n{image.width} {image.height}\n255\n")
        for y in range(image.height):
            row = image.pixels[y * image.width:(y + 1) * image.width]
            fh.write(" ".join(str(v) for v in row) + "\n")


def read_pgm(path: str) -> RasterImage:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] == b"P5":
        header, pixels = _parse_pgm_header(data, n_fields=4)
        width, height, maxval = header[1], header[2], header[3]
        if maxval != 255:
            raise InvalidInputError(f"unsupported PGM maxval {maxval}")
        expected = width * height
        if len(pixels) < expected:
            raise InvalidInputError("truncated P5 pixel data")
        return RasterImage(width=width, height=height, pixels=bytes(pixels[:expected]))
    if data[:2] == b"P2":
        tokens = _pgm_tokens(data)
        if len(tokens) < 4:
            raise InvalidInputError("truncated P2 header")
        width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
        if maxval != 255:
            raise InvalidInputError(f"unsupported PGM maxval {maxval}")
        values = [int(t) for t in tokens[4:]]
        if len(values) != width * height:
            raise InvalidInputError(
                f"P2 pixel count {len(values)} does not match {width}x{height}"
            )
        return RasterImage(width=width, height=height, pixels=bytes(values))
    raise InvalidInputError(f"not a PGM file: {path}")


def _pgm_tokens(data: bytes) -> list[str]:
    # strip comments, then whitespace-tokenize
    lines = []
    for line in data.decode("ascii", errors="replace").split("\n"):
        hash_at = line.find("#")
        lines.append(line if hash_at < 0 else line[:hash_at])
    return "\n".join(lines).split()


def _parse_pgm_header(data: bytes, n_fields: int) -> tuple[list[int | bytes], bytes]:
    # P5 header: magic, width, height, maxval, then a single whitespace byte
    # before raw pixels. Comments may appear between fields.
    fields: list[int | bytes] = []
    pos = 0
    while len(fields) < n_fields:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        token = data[start:pos]
        fields.append(token if not fields else int(token))
    pos += 1  # the single whitespace after maxval
    return fields, data[pos:]
