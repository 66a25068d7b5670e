"""Sequence-kernel correctness: frozen cases, dual-path agreement, and
exhaustive small-domain oracles."""

from __future__ import annotations

import itertools
import random
import subprocess
import sys

import numpy as np
import pytest

from laug import kernels


def lcs_enumeration_oracle(a: str, b: str) -> int:
    """Longest common subsequence by enumerating subsequences of a."""
    best = 0
    for mask in range(1 << len(a)):
        sub = [a[i] for i in range(len(a)) if mask >> i & 1]
        it = iter(b)
        if all(ch in it for ch in sub):
            best = max(best, len(sub))
    return best


def edit_table_oracle(a: str, b: str) -> int:
    """Levenshtein via the full O(len*len) table."""
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            table[i][j] = min(table[i - 1][j] + 1, table[i][j - 1] + 1,
                              table[i - 1][j - 1] + cost)
    return table[len(a)][len(b)]


FROZEN_LCS = [
    ("banana", "ananas", 5),
    ("leicester", "lester", 6),
    ("abc", "abc", 3),
    ("abc", "xyz", 0),
    ("", "anything", 0),
    ("", "", 0),
    ("aggtab", "gxtxayb", 4),
    ("上海大学", "海上大学堂", 3),
]

FROZEN_EDIT = [
    ("kitten", "sitting", 3),
    ("flaw", "lawn", 2),
    ("", "abc", 3),
    ("abc", "", 3),
    ("same", "same", 0),
    ("café", "cafe", 1),
]


@pytest.mark.parametrize("a,b,want", FROZEN_LCS)
def test_lcs_frozen(a, b, want):
    assert kernels.lcs_len(a, b) == want
    assert kernels.lcs_len(b, a) == want


@pytest.mark.parametrize("a,b,want", FROZEN_EDIT)
def test_edit_frozen(a, b, want):
    assert kernels.edit_distance(a, b) == want
    assert kernels.edit_distance(b, a) == want


def test_lcs_exhaustive_small():
    strings = [""]
    for n in range(1, 5):
        strings += ["".join(t) for t in itertools.product("ab", repeat=n)]
    for a in strings:
        for b in strings:
            assert kernels.lcs_len(a, b) == lcs_enumeration_oracle(a, b), \
                (a, b)


def test_edit_exhaustive_small():
    strings = [""]
    for n in range(1, 4):
        strings += ["".join(t) for t in itertools.product("abc", repeat=n)]
    for a in strings:
        for b in strings:
            assert kernels.edit_distance(a, b) == edit_table_oracle(a, b), \
                (a, b)


def _random_strings(rng: random.Random, n: int) -> list[str]:
    alphabet = "abcdeé中:'0123 "
    return ["".join(rng.choice(alphabet)
                    for _ in range(rng.randrange(0, 24)))
            for _ in range(n)]


def test_numpy_path_matches_oracles():
    rng = random.Random(202)
    for a, b in zip(_random_strings(rng, 150), _random_strings(rng, 150)):
        ea, eb = kernels.encode(a), kernels.encode(b)
        if len(ea) and len(eb):
            assert kernels._lcs_len_np(ea, eb) == edit_free_lcs(a, b)
        assert kernels._edit_distance_np(ea, eb) == edit_table_oracle(a, b)


def edit_free_lcs(a: str, b: str) -> int:
    """Full-table LCS DP, independent of the shipped kernels."""
    prev = [0] * (len(b) + 1)
    for ch in a:
        cur = [0]
        for j, cb in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if cb == ch
                       else max(prev[j], cur[-1]))
        prev = cur
    return prev[-1]


@pytest.mark.skipif(not kernels.USING_NUMBA, reason="numba path inactive")
def test_numba_and_numpy_paths_agree():
    rng = random.Random(77)
    for a, b in zip(_random_strings(rng, 250), _random_strings(rng, 250)):
        ea, eb = kernels.encode(a), kernels.encode(b)
        if len(ea) and len(eb):
            assert int(kernels._lcs_len_nb(ea, eb)) == \
                kernels._lcs_len_np(ea, eb), (a, b)
        assert int(kernels._edit_distance_nb(ea, eb)) == \
            kernels._edit_distance_np(ea, eb), (a, b)


def test_encode_codepoints():
    arr = kernels.encode("aé中")
    assert arr.dtype == np.uint32
    assert arr.tolist() == [ord("a"), ord("é"), ord("中")]
    assert kernels.encode("").size == 0


def test_edit_distance_seq_hashables():
    assert kernels.edit_distance_seq([], []) == 0
    assert kernels.edit_distance_seq(["a"], []) == 1
    assert kernels.edit_distance_seq(
        ["i", "want", "to", "go"], ["i", "need", "to", "go"]) == 1
    assert kernels.edit_distance_seq(
        [("a", 1), ("b", 2)], [("b", 2), ("a", 1), ("c", 3)]) == 2
    words_a = "the quick brown fox".split()
    words_b = "the slow brown dog jumped".split()
    assert kernels.edit_distance_seq(words_a, words_b) == 3


def test_env_selects_numpy_fallback():
    code = (
        "import os; os.environ['LAUG_KERNELS']='numpy'; "
        "from laug import kernels; "
        "assert kernels.USING_NUMBA is False; "
        "assert kernels.lcs_len('banana','ananas')==5; "
        "assert kernels.edit_distance('kitten','sitting')==3; "
        "print('ok')"
    )
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "ok"


def test_env_rejects_unknown_mode():
    code = ("import os; os.environ['LAUG_KERNELS']='bogus'; "
            "import laug.kernels")
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True)
    assert out.returncode != 0
    assert "LAUG_KERNELS" in out.stderr
