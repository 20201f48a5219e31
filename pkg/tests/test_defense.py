import math
import random

import pytest
from hypothesis import given, strategies as st

from vertbench.core import InvalidInputError
from vertbench.defense import (
    UnigramTable,
    default_unigram_table,
    load_unigrams,
    make_defense,
    normalize_simple,
    reverse,
    segment,
    strip_to_alnum,
)
from vertbench.transform import transform, transform_chunk, transform_text


class TestNormalizeSimple:
    def test_collapses_vertical_output(self):
        assert normalize_simple("g  movie\no\no\nd") == "g movie o o d"

    def test_idempotent_on_normal_text(self):
        assert normalize_simple("already normal text") == "already normal text"

    def test_whitespace_only(self):
        assert normalize_simple("  ") == ""

    @given(st.text(max_size=120))
    def test_idempotent_and_clean(self, text):
        once = normalize_simple(text)
        assert normalize_simple(once) == once
        assert "\n" not in once
        assert "  " not in once
        assert not once.startswith(" ") and not once.endswith(" ")


def oracle_best_segmentation(stripped: str, table: UnigramTable) -> str:
    """Exhaustive enumeration over all 2^(n-1) split patterns.

    Independent scoring arithmetic (log10 instead of natural log) so a shared
    bug with the implementation cannot hide; the argmax is base-invariant.
    Ties resolve toward earlier split positions, mirroring the contract.
    """
    n = len(stripped)
    assert 0 < n <= 14, "oracle is exponential; keep inputs short"

    def score10(word: str) -> float:
        count = table.counts.get(word)
        if count is not None:
            return math.log10(count) - math.log10(table.total)
        return -math.log10(table.total) - (len(word) - 1)

    best_words: list[str] | None = None
    best_score = -math.inf
    for mask in range(2 ** (n - 1)):
        words = []
        start = 0
        ok = True
        for pos in range(1, n):
            if mask & (1 << (pos - 1)):
                if pos - start > table.max_word_len:
                    ok = False
                    break
                words.append(stripped[start:pos])
                start = pos
        if not ok or n - start > table.max_word_len:
            continue
        words.append(stripped[start:n])
        total = sum(score10(w) for w in words)
        if total > best_score + 1e-12:
            best_score = total
            best_words = words
    assert best_words is not None
    return " ".join(best_words)


class TestSegment:
    def test_this_is_a_test(self):
        table = default_unigram_table()
        assert segment("thisisatest", table) == "this is a test"
        assert segment("thisisatest", table) == oracle_best_segmentation("thisisatest", table)

    def test_good_movie(self):
        table = default_unigram_table()
        assert segment("goodmovie", table) == "good movie"
        assert segment("goodmovie", table) == oracle_best_segmentation("goodmovie", table)

    def test_single_char(self):
        assert segment("x", default_unigram_table()) == "x"

    def test_known_word_not_split(self):
        table = default_unigram_table()
        assert segment("movie", table) == "movie"
        assert segment("movie", table) == oracle_best_segmentation("movie", table)

    def test_strips_case_and_punctuation(self):
        assert segment("This, is a TEST!", default_unigram_table()) == "this is a test"

    def test_empty_after_strip(self):
        assert segment("?!- \n", default_unigram_table()) == ""

    def test_matches_oracle_on_random_short_strings(self):
        table = default_unigram_table()
        rng = random.Random(4242)
        frequent = [w for w, c in sorted(table.counts.items(), key=lambda kv: -kv[1])[:100]]
        for _ in range(40):
            if rng.random() < 0.5:
                raw = "".join(rng.choice(frequent) for _ in range(rng.randint(1, 3)))[:12]
            else:
                raw = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz")
                              for _ in range(rng.randint(1, 10)))
            assert segment(raw, table) == oracle_best_segmentation(raw, table)

    @given(st.text(max_size=60))
    def test_concatenation_preserved(self, text):
        out = segment(text, default_unigram_table())
        assert out.replace(" ", "") == strip_to_alnum(text)

    def test_unknown_penalty_explicit(self):
        # one known word; unknown words pay 1/(total * 10^(len-1))
        table = UnigramTable(counts={"ab": 10})
        assert table.logscore("ab") == pytest.approx(math.log(10 / 10))
        assert table.logscore("zzz") == pytest.approx(math.log(1 / (10 * 10 ** 2)))

    def test_max_word_len_respected(self):
        table = UnigramTable(counts={"abcd": 5}, max_word_len=2)
        # "abcd" cannot be taken whole with max_word_len=2
        assert segment("abcd", table) == oracle_best_segmentation("abcd", table)
        assert all(len(w) <= 2 for w in segment("abcd", table).split())


class TestUnigramTable:
    def test_loader_round_trip(self, tmp_path):
        path = tmp_path / "uni.tsv"
        path.write_text("hello\t10\nworld\t5\n")
        table = load_unigrams(str(path))
        assert table.counts == {"hello": 10, "world": 5}
        assert table.total == 15

    def test_loader_rejects_nonpositive(self, tmp_path):
        path = tmp_path / "uni.tsv"
        path.write_text("hello\t0\n")
        with pytest.raises(InvalidInputError):
            load_unigrams(str(path))

    def test_loader_rejects_bad_words(self):
        with pytest.raises(InvalidInputError):
            UnigramTable(counts={"Hello": 3})
        with pytest.raises(InvalidInputError):
            UnigramTable(counts={"two words": 3})

    def test_shipped_table_size(self):
        table = default_unigram_table()
        assert 9_000 <= len(table.counts) <= 11_000
        assert all(c > 0 for c in table.counts.values())


class TestReverse:
    def test_inverts_single_chunk(self):
        lines = transform_chunk(["good", "movie"], {0})
        assert reverse("\n".join(lines)) == "good movie"

    def test_plain_text_normalizes(self):
        assert reverse("just  some ordinary   text") == "just some ordinary text"

    def test_fully_vertical_collapses_to_one_word(self):
        # the documented failure mode: no line reveals word boundaries
        assert reverse("g\no\no\nd") == "good"

    def test_multi_block(self):
        text = transform(["good", "movie", "wow", "fine"], {0, 2}, width=2)
        assert reverse(text) == "good movie wow fine"

    def test_second_vertical_word_mid_row(self):
        lines = transform_chunk(["alpha", "be", "gamma"], {0, 2})
        assert reverse("\n".join(lines)) == "alpha be gamma"

    def test_trailing_newline_harmless(self):
        text = transform(["good", "movie"], {0}, width=10)
        assert text.endswith("\n")
        assert reverse(text) == "good movie"

    def test_chaff_letters_absorbed_into_words(self):
        # a lone chaff letter under "movie" joins movie's column
        lines = transform_chunk(["good", "movie"], {0})
        lines[1] = lines[1][:4] + "x" + lines[1][5:]
        out = reverse("\n".join(lines))
        assert out != "good movie"
        assert "good" in out  # the vertical word itself is still intact

    def test_adjacent_chaff_pair_breaks_block(self):
        # a two-letter chaff run looks like a word, severing the block
        lines = transform_chunk(["good", "movie"], {0})
        lines[2] = lines[2][:4] + "xy" + lines[2][6:]
        out = reverse("\n".join(lines))
        assert "good" not in out.split()

    def test_nearest_left_column_fallback(self):
        # chars drifted one column right still reach their accumulator
        assert reverse("g movie\n o     \n o     \n d     ") == "good movie"

    def test_empty_input(self):
        assert reverse("") == ""

    def test_roundtrip_with_chaff_usually_differs(self):
        words = ["weather", "report", "says", "sunny", "skies", "today"]
        base = normalize_simple(" ".join(words))
        differing = 0
        for seed in range(20):
            text = transform_text(words, {2}, 10, chaff_p=0.6, rng_seed=seed)
            if reverse(text) != base:
                differing += 1
        assert differing >= 10


def random_doc(rng: random.Random, n_words: int, safe: bool) -> tuple[list[str], set[int]]:
    words = ["".join(rng.choice("abcdefghijklmnopqrstuvwxyz")
                     for _ in range(rng.randint(1, 12)))
             for _ in range(n_words)]
    selected = {i for i in range(n_words) if rng.random() < 0.5}
    if safe:
        # keep at least one unselected multi-character word per chunk so no
        # chunk is written entirely vertically (the inherently ambiguous case)
        for start in range(0, n_words, 5):
            chunk = range(start, min(start + 5, n_words))
            if not any(i not in selected and len(words[i]) > 1 for i in chunk):
                anchor = rng.choice(list(chunk))
                words[anchor] = "anchor"
                selected.discard(anchor)
    return words, selected


class TestTransformReverseRoundTrip:
    def test_exact_on_unambiguous_population(self):
        rng = random.Random(20240)
        for _ in range(400):
            n_words = rng.randint(5, 40)
            words, selected = random_doc(rng, n_words, safe=True)
            text = transform(words, selected, 5)
            assert reverse(text) == " ".join(words)

    def test_transform_is_not_injective(self):
        """Two distinct word sequences can produce identical transform output,
        so no reverse function can invert both; reverse resolves such texts
        as vertical continuations (the documented entirely-vertical case)."""
        merged = transform(["x", "y", "z", "ab", "q"], {3}, width=1)
        split = transform(["x", "y", "z", "a", "b", "q"], set(), width=1)
        assert merged == split
        assert " ".join(["x", "y", "z", "ab", "q"]) != " ".join(["x", "y", "z", "a", "b", "q"])
        # every line is a single character, so reverse reads the whole text
        # as one vertical column — neither source round-trips
        assert reverse(merged) == "xyzabq"


class TestMakeDefense:
    def test_none_is_identity(self):
        assert make_defense("none")("a  b") == "a  b"

    def test_simple(self):
        assert make_defense("simple")("a  b") == "a b"

    def test_segment_uses_given_table(self):
        table = UnigramTable(counts={"aa": 100, "bb": 100})
        assert make_defense("segment", table)("aabb") == "aa bb"

    def test_reverse(self):
        assert make_defense("reverse")("g\no\no\nd") == "good"

    def test_unknown_rejected(self):
        with pytest.raises(InvalidInputError):
            make_defense("rot13")
