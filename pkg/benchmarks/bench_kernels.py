"""Compare the compiled string kernels with the pure-numpy fallback.

Runs the same seeded workload twice, in subprocesses, once with
LAUG_KERNELS=numba and once with LAUG_KERNELS=numpy, and reports per-call
timings. Warmup calls happen before the clock starts so JIT compilation
is never counted.

Usage: python benchmarks/bench_kernels.py [--pairs N] [--repeats K]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time

ALPHABET = "abcdefghijklmnopqrstuvwxyz ':0123456789é中"


def make_pairs(n_pairs: int) -> list[tuple[str, str]]:
    rng = random.Random(1234)
    pairs = []
    for _ in range(n_pairs):
        la = rng.randint(5, 80)
        lb = rng.randint(5, 80)
        a = "".join(rng.choice(ALPHABET) for _ in range(la))
        if rng.random() < 0.5:
            # related strings: corrupt a few positions of a copy
            b = list(a)
            for _ in range(rng.randint(1, 6)):
                b[rng.randrange(len(b))] = rng.choice(ALPHABET)
            b = "".join(b)[:lb] or "x"
        else:
            b = "".join(rng.choice(ALPHABET) for _ in range(lb))
        pairs.append((a, b))
    return pairs


def run_worker(n_pairs: int, repeats: int) -> None:
    from laug import kernels

    pairs = make_pairs(n_pairs)
    word_pairs = [(a.split(), b.split()) for a, b in pairs]

    # warmup: first calls trigger compilation on the numba path
    kernels.lcs_len(*pairs[0])
    kernels.edit_distance(*pairs[0])
    kernels.edit_distance_seq(*word_pairs[0])

    results = {"mode": "numba" if kernels.USING_NUMBA else "numpy"}
    for name, fn, data in (
            ("lcs_len", kernels.lcs_len, pairs),
            ("edit_distance", kernels.edit_distance, pairs),
            ("edit_distance_seq", kernels.edit_distance_seq, word_pairs)):
        best = float("inf")
        checksum = 0
        for _ in range(repeats):
            t0 = time.perf_counter()
            checksum = 0
            for a, b in data:
                checksum += fn(a, b)
            best = min(best, time.perf_counter() - t0)
        results[name] = {"best_s": best,
                         "per_call_us": 1e6 * best / len(data),
                         "checksum": checksum}
    print(json.dumps(results))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pairs", type=int, default=400)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--worker", action="store_true",
                    help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.worker:
        run_worker(args.pairs, args.repeats)
        return 0

    reports = {}
    for mode in ("numba", "numpy"):
        env = dict(os.environ, LAUG_KERNELS=mode)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker", "--pairs",
             str(args.pairs), "--repeats", str(args.repeats)],
            capture_output=True, text=True, env=env)
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return 1
        reports[mode] = json.loads(proc.stdout)

    for mode, rep in reports.items():
        assert rep["mode"] == mode, f"worker ran in {rep['mode']}, not {mode}"
    names = ("lcs_len", "edit_distance", "edit_distance_seq")
    for name in names:
        a = reports["numba"][name]["checksum"]
        b = reports["numpy"][name]["checksum"]
        assert a == b, f"{name}: kernels disagree ({a} vs {b})"

    print(f"{'function':<20}{'numba us/call':>15}{'numpy us/call':>15}"
          f"{'speedup':>9}")
    for name in names:
        nb = reports["numba"][name]["per_call_us"]
        np_ = reports["numpy"][name]["per_call_us"]
        print(f"{name:<20}{nb:>15.1f}{np_:>15.1f}{np_ / nb:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
