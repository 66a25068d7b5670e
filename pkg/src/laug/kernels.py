"""Sequence-metric kernels: LCS length and Levenshtein distance.

Both metrics run over integer code arrays. The default implementation is
numba-compiled; a pure-numpy fallback covers environments without a working
JIT. Selection is driven by the LAUG_KERNELS environment variable:

    auto   prefer numba, fall back to numpy if numba is missing (default)
    numba  require numba, raise if it cannot be imported
    numpy  force the fallback path

The fallback vectorizes the DP rows with accumulate tricks instead of
translating the scalar loops, so the two paths are independent enough to
cross-check in tests.
"""

from __future__ import annotations

import os
from typing import Hashable, Sequence

import numpy as np

_MODE = os.environ.get("LAUG_KERNELS", "auto").strip().lower()
if _MODE not in ("auto", "numba", "numpy"):
    raise RuntimeError(f"LAUG_KERNELS must be auto|numba|numpy, got {_MODE!r}")

_have_numba = False
if _MODE != "numpy":
    try:
        from numba import njit
        _have_numba = True
    except ImportError:
        if _MODE == "numba":
            raise

USING_NUMBA = _have_numba


def _lcs_len_np(a: np.ndarray, b: np.ndarray) -> int:
    # Row recurrence: cur[j] = max(prev[j+1], prev[j] + eq[j]) scanned with a
    # running max; correct because cur is nondecreasing along j.
    prev = np.zeros(len(b) + 1, dtype=np.int32)
    for i in range(len(a)):
        eq = (b == a[i]).astype(np.int32)
        cur = np.maximum.accumulate(np.maximum(prev[1:], prev[:-1] + eq))
        prev[1:] = cur
    return int(prev[-1])


def _edit_distance_np(a: np.ndarray, b: np.ndarray) -> int:
    # dp[j] = min over the three classic moves; the substitution/deletion part
    # is elementwise, the insertion chain folds into a minimum.accumulate after
    # subtracting/re-adding an arange ramp.
    n = len(b)
    ramp = np.arange(n + 1, dtype=np.int32)
    dp = ramp.copy()
    for i in range(len(a)):
        sub = dp[:-1] + (b != a[i]).astype(np.int32)
        dele = dp[1:] + 1
        cand = np.minimum(sub, dele)
        dp[0] = i + 1
        # Resolve the left-to-right insertion chain new[j] = min(cand[j],
        # new[j-1]+1) as a prefix-min of (value - position) plus position.
        chain = np.concatenate((dp[:1], cand))
        dp[1:] = np.minimum.accumulate(chain - ramp)[1:] + ramp[1:]
    return int(dp[-1])


if _have_numba:

    @njit(cache=True)
    def _lcs_len_nb(a, b):  # pragma: no cover - exercised via wrapper
        na = len(a)
        nb = len(b)
        prev = np.zeros(nb + 1, dtype=np.int32)
        cur = np.zeros(nb + 1, dtype=np.int32)
        for i in range(na):
            ca = a[i]
            cur[0] = 0
            for j in range(1, nb + 1):
                if b[j - 1] == ca:
                    cur[j] = prev[j - 1] + 1
                else:
                    x = prev[j]
                    y = cur[j - 1]
                    cur[j] = x if x > y else y
            prev, cur = cur, prev
        return prev[nb]

    @njit(cache=True)
    def _edit_distance_nb(a, b):  # pragma: no cover - exercised via wrapper
        na = len(a)
        nb = len(b)
        dp = np.empty(nb + 1, dtype=np.int32)
        for j in range(nb + 1):
            dp[j] = j
        for i in range(na):
            diag = dp[0]
            dp[0] = i + 1
            ca = a[i]
            for j in range(1, nb + 1):
                old = dp[j]
                cost = 0 if b[j - 1] == ca else 1
                best = diag + cost
                if dp[j] + 1 < best:
                    best = dp[j] + 1
                if dp[j - 1] + 1 < best:
                    best = dp[j - 1] + 1
                dp[j] = best
                diag = old
        return dp[nb]

    _lcs_core = _lcs_len_nb
    _edit_core = _edit_distance_nb
else:
    _lcs_core = _lcs_len_np
    _edit_core = _edit_distance_np


def encode(s: str) -> np.ndarray:
    """Unicode code points of s as a uint32 array."""
    if not s:
        return np.empty(0, dtype=np.uint32)
    return np.frombuffer(s.encode("utf-32-le"), dtype=np.uint32)


def lcs_len(a: str, b: str) -> int:
    """Length of the longest common subsequence of two strings."""
    if not a or not b:
        return 0
    return int(_lcs_core(encode(a), encode(b)))


def lcs_len_codes(a: np.ndarray, b: np.ndarray) -> int:
    """LCS length over pre-encoded code arrays."""
    if len(a) == 0 or len(b) == 0:
        return 0
    return int(_lcs_core(a, b))


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance between two strings."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return int(_edit_core(encode(a), encode(b)))


def edit_distance_seq(xs: Sequence[Hashable], ys: Sequence[Hashable]) -> int:
    """Levenshtein distance between two sequences of hashable items."""
    if not xs:
        return len(ys)
    if not ys:
        return len(xs)
    ids: dict[Hashable, int] = {}
    def code(seq):
        out = np.empty(len(seq), dtype=np.uint32)
        for k, item in enumerate(seq):
            out[k] = ids.setdefault(item, len(ids))
        return out
    return int(_edit_core(code(xs), code(ys)))
