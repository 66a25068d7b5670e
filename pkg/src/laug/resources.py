"""Resource files: thesaurus, pronunciation lexicon, confusion tables,
disfluency distributions, unseen-value pools.

All files are plain text; blank lines and lines starting with '#' are
ignored. Formats:

    lexicon     first line `inventory PH1 PH2 ...`, then `WORD PH1 PH2 ...`
    thesaurus   `word: syn1, syn2, ...`
    stopwords   one word per line
    confusions  `word => cand1:w1, cand2:w2` and `w1 + w2 => merged`
    pools       `domain-slot: value1 | value2 | ...`
    disfluency  sections `[fillers] [edit_terms] [restart_terms] [points]
                [type_mix]`, each line `item weight` (weight last)
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources as importlib_resources

from .errors import ResourceError

DATA_PACKAGE = "laug"


def data_path(name: str) -> str:
    """Filesystem path of a bundled data file."""
    return str(importlib_resources.files(DATA_PACKAGE) / "data" / name)


def _lines(path: str | os.PathLike) -> list[str]:
    try:
        with open(path, encoding="utf-8") as f:
            raw = f.read().splitlines()
    except OSError as e:
        raise ResourceError(f"cannot read resource {path}: {e}") from e
    out = []
    for ln in raw:
        ln = ln.strip()
        if ln and not ln.startswith("#"):
            out.append(ln)
    return out


class PronunciationLexicon:
    """Word → phoneme-sequence map plus the declared phoneme inventory."""

    def __init__(self, entries: dict[str, tuple[str, ...]],
                 inventory: frozenset[str]):
        self.entries = entries
        self.inventory = inventory

    def lookup(self, word: str) -> tuple[str, ...] | None:
        return self.entries.get(word.strip().lower())

    def __len__(self):
        return len(self.entries)


def load_lexicon(path: str | os.PathLike) -> PronunciationLexicon:
    lines = _lines(path)
    if not lines or not lines[0].startswith("inventory"):
        raise ResourceError(
            f"{path}: lexicon must start with an 'inventory PH...' header")
    inventory = frozenset(lines[0].split()[1:])
    if not inventory:
        raise ResourceError(f"{path}: empty phoneme inventory")
    entries: dict[str, tuple[str, ...]] = {}
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) < 2:
            raise ResourceError(f"{path}: bad lexicon line {ln!r}")
        word = parts[0].lower()
        phones = tuple(parts[1:])
        for ph in phones:
            if ph not in inventory:
                raise ResourceError(
                    f"{path}: phoneme {ph!r} of {word!r} not in inventory")
        entries[word] = phones
    return PronunciationLexicon(entries, inventory)


def load_thesaurus(path: str | os.PathLike) -> dict[str, tuple[str, ...]]:
    out: dict[str, tuple[str, ...]] = {}
    for ln in _lines(path):
        word, sep, rest = ln.partition(":")
        if not sep:
            raise ResourceError(f"{path}: bad thesaurus line {ln!r}")
        word = word.strip().lower()
        syns = tuple(s.strip().lower() for s in rest.split(",") if s.strip())
        if not word or not syns:
            raise ResourceError(f"{path}: bad thesaurus line {ln!r}")
        out[word] = syns
    return out


def load_stopwords(path: str | os.PathLike) -> frozenset[str]:
    return frozenset(ln.lower() for ln in _lines(path))


@dataclass
class ConfusionTable:
    """Similar-sound substitutions and liaison merge patterns."""

    substitutions: dict[str, tuple[tuple[str, float], ...]] = \
        field(default_factory=dict)
    liaisons: dict[tuple[str, str], str] = field(default_factory=dict)


def load_confusions(path: str | os.PathLike) -> ConfusionTable:
    subs: dict[str, tuple[tuple[str, float], ...]] = {}
    liaisons: dict[tuple[str, str], str] = {}
    for ln in _lines(path):
        lhs, sep, rhs = ln.partition("=>")
        if not sep:
            raise ResourceError(f"{path}: bad confusion line {ln!r}")
        lhs = lhs.strip().lower()
        rhs = rhs.strip()
        if "+" in lhs:
            a, _, b = lhs.partition("+")
            a, b = a.strip(), b.strip()
            merged = rhs.lower()
            if not a or not b or not merged:
                raise ResourceError(f"{path}: bad liaison line {ln!r}")
            liaisons[(a, b)] = merged
            continue
        cands: list[tuple[str, float]] = []
        for part in rhs.split(","):
            part = part.strip()
            if not part:
                continue
            word, sep2, w = part.rpartition(":")
            if sep2:
                try:
                    weight = float(w)
                except ValueError:
                    raise ResourceError(
                        f"{path}: bad weight in {ln!r}") from None
            else:
                word, weight = part, 1.0
            word = word.strip().lower()
            if not word or weight <= 0:
                raise ResourceError(f"{path}: bad candidate in {ln!r}")
            if word == lhs:
                raise ResourceError(
                    f"{path}: confusable equals its key in {ln!r}")
            cands.append((word, weight))
        if not lhs or not cands:
            raise ResourceError(f"{path}: bad confusion line {ln!r}")
        subs[lhs] = tuple(cands)
    return ConfusionTable(substitutions=subs, liaisons=liaisons)


@dataclass
class DisfluencyDistributions:
    """Weighted terms and the per-gap interruption probability table."""

    fillers: tuple[tuple[str, float], ...]
    edit_terms: tuple[tuple[str, float], ...]
    restart_terms: tuple[tuple[str, float], ...]
    p_point: dict[str, float]
    type_mix: dict[str, float]
    default_p_point: float = 0.06

    def point_prob(self, kind: str, decile: int) -> float:
        return self.p_point.get(f"{kind},{decile}", self.default_p_point)


_SD_TYPES = ("pause", "repeat", "restart", "repair")


def load_disfluency(path: str | os.PathLike) -> DisfluencyDistributions:
    sections: dict[str, list[tuple[str, float]]] = {
        "fillers": [], "edit_terms": [], "restart_terms": [],
        "points": [], "type_mix": []}
    current: str | None = None
    for ln in _lines(path):
        if ln.startswith("[") and ln.endswith("]"):
            current = ln[1:-1].strip().lower()
            if current not in sections:
                raise ResourceError(f"{path}: unknown section [{current}]")
            continue
        if current is None:
            raise ResourceError(f"{path}: line outside any section: {ln!r}")
        item, _, w = ln.rpartition(" ")
        item = item.strip()
        if not item:
            raise ResourceError(f"{path}: missing weight in {ln!r}")
        try:
            weight = float(w)
        except ValueError:
            raise ResourceError(f"{path}: bad weight in {ln!r}") from None
        sections[current].append((item, weight))

    for name in ("fillers", "edit_terms", "restart_terms", "type_mix"):
        if not sections[name]:
            raise ResourceError(f"{path}: section [{name}] is empty")
        for item, w in sections[name]:
            if w <= 0:
                raise ResourceError(
                    f"{path}: non-positive weight for {item!r}")

    p_point: dict[str, float] = {}
    default_p = 0.06
    for item, w in sections["points"]:
        if not (0.0 <= w <= 1.0):
            raise ResourceError(
                f"{path}: point probability {w} out of [0,1]")
        if item == "default":
            default_p = w
        else:
            p_point[item.replace(" ", "")] = w

    type_mix: dict[str, float] = {}
    for item, w in sections["type_mix"]:
        if item not in _SD_TYPES:
            raise ResourceError(f"{path}: unknown disfluency type {item!r}")
        type_mix[item] = w
    for t in _SD_TYPES:
        type_mix.setdefault(t, 0.0)

    return DisfluencyDistributions(
        fillers=tuple(sections["fillers"]),
        edit_terms=tuple(sections["edit_terms"]),
        restart_terms=tuple(sections["restart_terms"]),
        p_point=p_point, type_mix=type_mix, default_p_point=default_p)


def load_unseen_values(path: str | os.PathLike,
                       train_ontology: dict[str, list[str]] | None = None
                       ) -> dict[str, tuple[str, ...]]:
    """Unseen-value pools per slot-key.

    With train_ontology given, raises if any pool value already occurs in
    the training ontology for its slot-key (the pools must be unseen).
    """
    out: dict[str, tuple[str, ...]] = {}
    for ln in _lines(path):
        key, sep, rest = ln.partition(":")
        if not sep:
            raise ResourceError(f"{path}: bad pool line {ln!r}")
        key = key.strip().lower()
        vals = tuple(v.strip() for v in rest.split("|") if v.strip())
        if not key or not vals:
            raise ResourceError(f"{path}: bad pool line {ln!r}")
        out[key] = vals
    if train_ontology is not None:
        for key, vals in out.items():
            seen = {" ".join(v.lower().split())
                    for v in train_ontology.get(key, ())}
            for v in vals:
                if " ".join(v.lower().split()) in seen:
                    raise ResourceError(
                        f"pool value {v!r} for {key} occurs in the training "
                        f"ontology; pools must hold unseen values")
    return out


@dataclass
class ResourceBundle:
    """Everything the perturbation families read from disk."""

    lexicon: PronunciationLexicon
    thesaurus: dict[str, tuple[str, ...]]
    stopwords: frozenset[str]
    confusions: ConfusionTable
    disfluency: DisfluencyDistributions
    unseen_values: dict[str, tuple[str, ...]]


def default_bundle(lexicon_path: str | None = None,
                   thesaurus_path: str | None = None,
                   stopwords_path: str | None = None,
                   confusions_path: str | None = None,
                   disfluency_path: str | None = None,
                   pools_path: str | None = None) -> ResourceBundle:
    """The bundled resources, with per-file overrides."""
    return ResourceBundle(
        lexicon=load_lexicon(lexicon_path or data_path("lexicon.txt")),
        thesaurus=load_thesaurus(thesaurus_path or data_path("thesaurus.txt")),
        stopwords=load_stopwords(stopwords_path or data_path("stopwords.txt")),
        confusions=load_confusions(
            confusions_path or data_path("confusions.txt")),
        disfluency=load_disfluency(
            disfluency_path or data_path("disfluency.txt")),
        unseen_values=load_unseen_values(
            pools_path or data_path("unseen_values.txt")),
    )
