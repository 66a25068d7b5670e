"""Simulated speech-recognition corruption.

A generative noise channel stands in for a real TTS-ASR loop, producing the
three observed error classes: spoken-number expansion, liaison merges of
adjacent words, and similar-sound word substitution. Afterwards the
original slot values are re-detected in the noisy text; survivors adopt
their noisy surface form, casualties are dropped together with their label.
"""

from __future__ import annotations

import random
import weakref
from dataclasses import dataclass

from . import kernels
from .corpus import SpanAnnotation, Utterance, slot_key
from .records import AugmentationRecord, make_record
from .resources import ConfusionTable, PronunciationLexicon, ResourceBundle
from .textkit import detect_value, letter_bigrams, number_to_spoken, \
    number_to_spoken_edits, strip_case_punct

__all__ = ["SrConfig", "ConfusionTable", "simulate_asr", "redetect_values",
           "sr_augment", "phonetic_neighbors"]


@dataclass(frozen=True)
class SrConfig:
    p_confuse: float = 0.08
    p_liaison: float = 0.05
    redetect_threshold: float = 0.7
    strip_case_punct: bool = True

    def __post_init__(self):
        for name in ("p_confuse", "p_liaison"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must be in [0,1], got {v}")
        if not (0.0 < self.redetect_threshold <= 1.0):
            raise ValueError("redetect_threshold must be in (0,1]")


def _split_punct(chunk: str) -> tuple[str, str, str]:
    """(leading punct, core, trailing punct) of one whitespace chunk."""
    lo = 0
    hi = len(chunk)
    while lo < hi and not chunk[lo].isalnum():
        lo += 1
    while hi > lo and not chunk[hi - 1].isalnum():
        hi -= 1
    return chunk[:lo], chunk[lo:hi], chunk[hi:]


_NEIGHBOR_CACHE: "weakref.WeakKeyDictionary" = weakref.WeakKeyDictionary()


def phonetic_neighbors(lexicon: PronunciationLexicon,
                       word: str) -> tuple[str, ...]:
    """Lexicon words sounding like `word` (phoneme edit distance <= 1).

    Out-of-lexicon words fall back to comparing letter-bigram sequences
    against the lexicon headwords with the same distance rule.
    """
    cache = _NEIGHBOR_CACHE.setdefault(lexicon, {})
    hit = cache.get(word)
    if hit is not None:
        return hit
    phones = lexicon.lookup(word)
    out: list[str] = []
    if phones is not None:
        for other, ph2 in lexicon.entries.items():
            if other == word or abs(len(ph2) - len(phones)) > 1:
                continue
            if kernels.edit_distance_seq(phones, ph2) <= 1:
                out.append(other)
    else:
        bi = letter_bigrams(word)
        if bi:
            for other in lexicon.entries:
                bi2 = letter_bigrams(other)
                if other == word or abs(len(bi2) - len(bi)) > 1:
                    continue
                if kernels.edit_distance_seq(bi, bi2) <= 1:
                    out.append(other)
    result = tuple(out)
    cache[word] = result
    return result


def simulate_asr(u: Utterance, cfg: SrConfig, table: ConfusionTable,
                 lex: ResourceBundle, rng: random.Random
                 ) -> tuple[str, list[tuple[str, str, str]]]:
    """Noisy transcript of u.text plus a trace of every edit.

    Pipeline: (1) expand numbers to spoken form, (2) liaison merges over
    adjacent word pairs (table pairs, or identical boundary phonemes) with
    probability p_liaison, (3) similar-sound substitution of words that
    have table entries or phonetic neighbors with probability p_confuse,
    (4) lowercase and strip punctuation. Slot-value words are fair game.
    """
    lexicon = lex.lexicon if isinstance(lex, ResourceBundle) else lex
    trace: list[tuple[str, str, str]] = []
    working, num_edits = number_to_spoken_edits(u.text)
    for before, after in num_edits:
        trace.append(("spoken", before, after))

    chunks = working.split()
    edited = False

    # liaison: left to right, merged chunks do not chain
    i = 0
    while i < len(chunks) - 1:
        lead_a, a, trail_a = _split_punct(chunks[i])
        lead_b, b, trail_b = _split_punct(chunks[i + 1])
        merged = None
        if a and b and not trail_a and not lead_b:
            merged = table.liaisons.get((a.lower(), b.lower()))
            if merged is None:
                pa = lexicon.lookup(a)
                pb = lexicon.lookup(b)
                if pa and pb and pa[-1] == pb[0]:
                    merged = a.lower() + b.lower()[1:]
        if merged is not None and rng.random() < cfg.p_liaison:
            trace.append(("liaison", f"{a} {b}", merged))
            chunks[i:i + 2] = [lead_a + merged + trail_b]
            edited = True
        i += 1

    # similar-sound substitution
    for j, chunk in enumerate(chunks):
        lead, core, trail = _split_punct(chunk)
        if not core:
            continue
        w = core.lower()
        subs = table.substitutions.get(w)
        if subs:
            words = [c for c, _ in subs]
            weights = [wt for _, wt in subs]
        else:
            words = list(phonetic_neighbors(lexicon, w))
            weights = None
        if not words:
            continue
        if rng.random() < cfg.p_confuse:
            new = rng.choices(words, weights=weights)[0] if weights \
                else rng.choice(words)
            trace.append(("confuse", w, new))
            chunks[j] = lead + new + trail
            edited = True

    noisy = " ".join(chunks) if edited else working
    if cfg.strip_case_punct:
        stripped = strip_case_punct(noisy)
        if stripped != noisy:
            trace.append(("strip", noisy, stripped))
        noisy = stripped
    return noisy, trace


def redetect_values(noisy_text: str, original: Utterance, cfg: SrConfig,
                    source: tuple[str, int] = ("", 0),
                    extra_notes: tuple[str, ...] = ()
                    ) -> AugmentationRecord:
    """Find each original span value in the noisy text or drop its label.

    Values are number-expanded before matching. Survivors take the matched
    noisy window as their new value and span; items whose best window falls
    below the threshold are dropped (recorded in notes). Requests and
    slot-less items pass through untouched.
    """
    spans_by_item = {sp.item: sp for sp in original.spans}
    notes = list(extra_notes)
    new_da = []
    new_spans: list[SpanAnnotation] = []
    claimed: list[tuple[int, int]] = []
    for idx, item in enumerate(original.da):
        if not item.slot or item.value == "?" or idx not in spans_by_item:
            new_da.append(item)
            continue
        spoken = number_to_spoken(item.value)
        m = detect_value(noisy_text, spoken, cfg.redetect_threshold,
                         exclude=claimed)
        if m is None:
            notes.append(
                f"sr:dropped:{slot_key(item.domain, item.slot)}:{item.value}")
            continue
        surface = noisy_text[m.start:m.end]
        new_item = item.replace_value(surface)
        if new_item in new_da:
            notes.append(
                f"sr:merged:{slot_key(item.domain, item.slot)}:{item.value}")
            continue
        claimed.append((m.start, m.end))
        if new_item.value != item.value:
            notes.append(f"sr:value:{item.value}->{surface}")
        new_spans.append(SpanAnnotation(len(new_da), m.start, m.end))
        new_da.append(new_item)
    return make_record("sr", source, noisy_text, new_da, new_spans, notes)


def sr_augment(u: Utterance, cfg: SrConfig, table: ConfusionTable,
               bundle: ResourceBundle, rng: random.Random,
               source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """simulate_asr followed by redetect_values, traces folded into notes."""
    noisy, trace = simulate_asr(u, cfg, table, bundle, rng)
    trace_notes = tuple(f"sr:{stage}:{before}->{after}"
                        for stage, before, after in trace
                        if stage != "strip")
    if any(stage == "strip" for stage, _, _ in trace):
        trace_notes += ("sr:strip",)
    return redetect_values(noisy, u, cfg, source=source,
                           extra_notes=trace_notes)
