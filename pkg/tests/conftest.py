"""Shared test utilities: deterministic corpora fixtures and a scripted
random stub for forcing specific perturbation choices."""

from __future__ import annotations

import random

import pytest

from laug.corpus import load_corpus
from laug.resources import data_path, default_bundle


class ForcedRandom(random.Random):
    """random.Random whose draws are scripted per method.

    Each keyword holds a queue of forced outcomes. choice/choices/sample
    assert the forced value is actually available, so a script that drifts
    from the code under test fails loudly instead of silently passing.
    """

    def __init__(self, *, random_vals=(), choice=(), choices=(),
                 randrange=(), randint=(), sample=()):
        super().__init__(0)
        self._random = list(random_vals)
        self._choice = list(choice)
        self._choices = list(choices)
        self._randrange = list(randrange)
        self._randint = list(randint)
        self._sample = list(sample)

    @staticmethod
    def _pop(queue: list, name: str):
        if not queue:
            raise AssertionError(f"ForcedRandom: {name} queue exhausted")
        return queue.pop(0)

    def random(self):
        return self._pop(self._random, "random")

    def choice(self, seq):
        want = self._pop(self._choice, "choice")
        seq = list(seq)
        if want not in seq:
            raise AssertionError(
                f"ForcedRandom: {want!r} not among choices {seq!r}")
        return want

    def choices(self, population, weights=None, *, cum_weights=None, k=1):
        want = self._pop(self._choices, "choices")
        population = list(population)
        if want not in population:
            raise AssertionError(
                f"ForcedRandom: {want!r} not in population {population!r}")
        return [want] * k

    def randrange(self, start, stop=None, step=1):
        want = self._pop(self._randrange, "randrange")
        lo, hi = (0, start) if stop is None else (start, stop)
        if not (lo <= want < hi):
            raise AssertionError(
                f"ForcedRandom: {want} outside randrange({lo},{hi})")
        return want

    def randint(self, a, b):
        want = self._pop(self._randint, "randint")
        if not (a <= want <= b):
            raise AssertionError(
                f"ForcedRandom: {want} outside randint({a},{b})")
        return want

    def sample(self, population, k, *, counts=None):
        want = list(self._pop(self._sample, "sample"))
        population = list(population)
        if len(want) != k or any(w not in population for w in want):
            raise AssertionError(
                f"ForcedRandom: sample {want!r} invalid for "
                f"{population!r} k={k}")
        return want

    def assert_exhausted(self):
        leftovers = {name: q for name, q in [
            ("random", self._random), ("choice", self._choice),
            ("choices", self._choices), ("randrange", self._randrange),
            ("randint", self._randint), ("sample", self._sample)] if q}
        assert not leftovers, f"unconsumed forced draws: {leftovers}"


@pytest.fixture(scope="session")
def fixture_corpus():
    return load_corpus(data_path("fixture_corpus.json"), strict=True)


@pytest.fixture(scope="session")
def mini_corpus():
    return load_corpus(data_path("mini_corpus.json"), strict=True)


@pytest.fixture(scope="session")
def bundle():
    return default_bundle()
