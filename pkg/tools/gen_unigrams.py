#!/usr/bin/env python3
"""Build the shipped ~10k-word unigram frequency table.

A curated core of common English words carries hand-assigned Zipf-tier
counts; the long tail comes from word frequencies harvested out of the
docstrings of the Python standard library and a few large installed
packages. Writes src/vertbench/data/unigrams.tsv.
"""

from __future__ import annotations

import ast
import collections
import os
import re
import sys
import sysconfig

TARGET_SIZE = 10_000
WORD_RE = re.compile(r"^[a-z]{2,24}$")
OUT_PATH = os.path.join(os.path.dirname(__file__), "..", "src", "vertbench", "data", "unigrams.tsv")

# (count, words) tiers, highest first. Counts are Zipf-flavored so the
# segmenter prefers frequent words without drowning the harvested tail.
TIERS: list[tuple[int, str]] = [
    (6_000_000, "the"),
    (3_500_000, "of and a to"),
    (2_000_000, "in is it you that this"),
    (1_200_000, "he was for on are as with his they i at be"),
    (800_000, "one have from or had by but not what all were we when your can "
              "said there use an each which she do how their if"),
    (500_000, "will up other about out many then them these so some her would "
              "make like him into time has look two more write go see no way "
              "could people my than first been who its now did get come made may"),
    (300_000, "part over new sound take only little work know place year live "
              "me back give most very after thing our just name good sentence "
              "man think say great where help through much before line right "
              "too mean old any same tell boy follow came want show also "
              "around form three small set put end does another well large "
              "must big even such because turn here why ask went men read need "
              "land different home us move try kind hand picture again change "
              "off play spell air away animal house point page letter mother "
              "answer found study still learn should america world high every "
              "near add food between own below country plant last school "
              "father keep tree never start city earth eye light thought head "
              "under story saw left dont few while along might close something "
              "seem next hard open example begin life always those both paper "
              "together got group often run"),
    (150_000, "important until children side feet car mile night walk white "
              "sea began grow took river four carry state once book hear stop "
              "without second late miss idea enough eat face watch far indian "
              "really almost let above girl sometimes mountain cut young talk "
              "soon list song being leave family body music color stand sun "
              "questions fish area mark dog horse birds problem complete room "
              "knew since ever piece told usually didnt friends easy heard "
              "order red door sure become top ship across today during short "
              "better best however low hours black products happened whole "
              "measure remember early waves reached listen wind rock space "
              "covered fast several hold himself toward five step morning "
              "passed vowel true hundred against pattern numeral table north "
              "slowly money map farm pulled draw voice seen cold cried plan "
              "notice south sing war ground fall king town unit figure "
              "certain field travel wood fire upon"),
    (80_000, "done english road halt ten fly gave box finally wait correct oh "
             "quickly person became shown minutes strong verb stars front "
             "feel fact inches street decided contain course surface produce "
             "building ocean class note nothing rest carefully scientists "
             "inside wheels stay green known island week less machine base "
             "ago stood plane system behind ran round boat game force brought "
             "understand warm common bring explain dry though language shape "
             "deep thousands yes clear equation yet government filled heat "
             "full hot check object am rule among noun power cannot able six "
             "size dark ball material special heavy fine pair circle include "
             "built matter square syllables perhaps bill felt suddenly test "
             "direction center farmers ready anything divided general energy "
             "subject europe moon region return believe dance members picked "
             "simple cells paint mind love cause rain exercise eggs train "
             "blue wish drop developed window difference distance heart site "
             "sum summer wall forest probably legs sat main winter wide "
             "written length reason kept interest arms brother race present "
             "beautiful store job edge past sign record finished discovered "
             "wild happy beside gone sky glass million west lay weather root "
             "instruments meet third months paragraph raised represent soft "
             "whether clothes flowers shall teacher held describe drive"),
    (40_000, "cross speak solve appear metal son either ice sleep village "
             "factors result jumped snow ride care floor hill pushed baby buy "
             "century outside everything tall already instead phrase soil bed "
             "copy free hope spring case laughed nation quite type themselves "
             "temperature bright lead everyone method section lake consonant "
             "within dictionary am hair age amount scale pounds although per "
             "broken moment tiny possible gold milk quiet natural lot stone "
             "act build middle speed count cat someone sail rolled bear "
             "wonder smiled angle fraction africa killed melody bottom trip "
             "hole poor lets fight surprise french died beat exactly remain "
             "dress iron couldnt fingers row least catch climbed wrote "
             "shouted continued itself else plains gas england burning design "
             "joined foot law ears grass youre grew skin valley cents key "
             "president brown trouble cool cloud lost sent symbols wear bad "
             "save experiment engine alone drawing east pay single touch "
             "information express mouth yard equal decimal yourself control "
             "practice report straight rise statement stick party seeds "
             "suppose woman coast bank period wire choose clean visit bit "
             "whose received garden please strange caught fell team god "
             "captain direct ring serve child desert increase history cost "
             "maybe business separate break uncle hunting flow lady students "
             "human art feeling supply corner electric insects crops tone "
             "hit sand doctor provide thus wont cook bones tail board modern "
             "compound mine wasnt fit addition belong safe soldiers guess "
             "silent trade rather compare crowd poem enjoy elements indicate "
             "except expect flat seven interesting sense string blow famous "
             "value wings movement pole exciting branches thick blood lie "
             "spot bell fun loud consider suggested thin position entered "
             "fruit tied rich dollars send sight chief japanese stream "
             "planets rhythm eight science major observe tube necessary "
             "weight meat lifted process army hat property particular swim "
             "terms current park sell shoulder industry wash block spread "
             "cattle wife sharp company radio call"),
    (20_000, "movie film actor actress director scene plot script cast crew "
             "comedy drama action thriller horror romance fantasy mystery "
             "documentary animation sequel prequel review critics audience "
             "cinema theater screen performance character characters acting "
             "role roles star starring award awards nominated oscar ticket "
             "popcorn funny sad scary excellent amazing awesome wonderful "
             "fantastic brilliant superb outstanding perfect incredible "
             "terrible awful horrible dreadful worst boring dull tedious "
             "mediocre lame disappointing disappointment mess masterpiece "
             "gem classic favorite recommend recommended avoid skip waste "
             "entertaining enjoyable delightful charming touching moving "
             "powerful compelling gripping engaging clever witty smart dumb "
             "stupid silly ridiculous absurd predictable original fresh "
             "stale cliche formulaic derivative innovative bold daring flawed "
             "flawless stunning gorgeous beautiful ugly bland generic soulless "
             "heartfelt sincere honest pretentious bloated overlong rushed "
             "uneven choppy seamless polished sloppy lazy inspired uninspired "
             "forgettable memorable unforgettable iconic legendary "
             "atrocious abysmal gripping riveting captivating mesmerizing "
             "thrilling chilling haunting disturbing shocking surprising "
             "hilarious laughable cringe bizarre weird quirky offbeat edgy"),
]


def curated() -> dict[str, int]:
    counts: dict[str, int] = {}
    for count, words in TIERS:
        for word in words.split():
            if WORD_RE.match(word) and word not in counts:
                counts[word] = count
    # single-letter words the tokeniser needs
    counts["a"] = 3_500_000
    counts["i"] = 1_200_000
    return counts


def iter_py_files() -> list[str]:
    roots = [sysconfig.get_paths()["stdlib"]]
    for pkg in ("numpy", "scipy", "sklearn", "pandas", "matplotlib"):
        try:
            module = __import__(pkg)
        except ImportError:
            continue
        roots.append(os.path.dirname(module.__file__))
    files = []
    for root in roots:
        for dirpath, dirnames, filenames in os.walk(root):
            dirnames[:] = [d for d in dirnames if d not in ("test", "tests", "__pycache__")]
            files.extend(os.path.join(dirpath, f) for f in filenames if f.endswith(".py"))
    return files


def harvest() -> collections.Counter:
    words: collections.Counter = collections.Counter()
    token_re = re.compile(r"[A-Za-z]+")
    for path in iter_py_files():
        try:
            with open(path, encoding="utf-8", errors="ignore") as fh:
                tree = ast.parse(fh.read())
        except (SyntaxError, ValueError, OSError):
            continue
        for node in ast.walk(tree):
            if isinstance(node, (ast.Module, ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
                doc = ast.get_docstring(node)
                if doc:
                    for tok in token_re.findall(doc):
                        tok = tok.lower()
                        if WORD_RE.match(tok):
                            words[tok] += 1
    return words


def main() -> int:
    core = curated()
    harvested = harvest()
    merged = dict(core)
    for word, count in harvested.items():
        merged[word] = max(merged.get(word, 0), count)
    # keep only words seen at least 3 times unless curated, then trim to size
    table = {w: c for w, c in merged.items() if w in core or c >= 3}
    top = sorted(table.items(), key=lambda kv: (-kv[1], kv[0]))[:TARGET_SIZE]
    os.makedirs(os.path.dirname(OUT_PATH), exist_ok=True)
    with open(OUT_PATH, "w", encoding="utf-8") as fh:
        for word, count in sorted(top):
            fh.write(f"{word}\t{count}\n")
    print(f"wrote {OUT_PATH}: {len(top)} words "
          f"({len(core)} curated, {len(harvested)} harvested candidates)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
