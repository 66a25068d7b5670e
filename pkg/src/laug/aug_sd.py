"""Speech disfluency injection: filled pauses, repeats, restarts, repairs.

All four types only ever insert text between tokens, never inside an
annotated span, so the dialog act survives unchanged by construction.
Interruption points come from a probability table keyed by the preceding
token's kind and the gap's position decile.
"""

from __future__ import annotations

import random
from dataclasses import dataclass  # noqa: F401  (re-exported types)

from .corpus import SpanAnnotation, Utterance, slot_key
from .errors import NoCandidateError, NoRepairableSlotError
from .records import AugmentationRecord, make_record
from .resources import DisfluencyDistributions
from .textkit import Token, WORD, tokenize_with_spans

__all__ = ["DisfluencyDistributions", "sample_interruption_points",
           "inject_pauses", "inject_repeats", "inject_restart",
           "inject_repair", "sd_augment", "SD_TYPES"]

SD_TYPES = ("pause", "repeat", "restart", "repair")


def _weighted(rng: random.Random,
              pairs: tuple[tuple[str, float], ...]) -> str:
    return rng.choices([p[0] for p in pairs],
                       weights=[p[1] for p in pairs])[0]


def _apply_insertions(u: Utterance, insertions: list[tuple[int, str]],
                      kind: str, source: tuple[str, int]
                      ) -> AugmentationRecord:
    """Splice insertions (positions in original coordinates) into u.text.

    Notes record each insertion so the original text can be reconstructed;
    spans shift right, and a position strictly inside a span is an error.
    """
    ordered = sorted(insertions, key=lambda x: x[0])
    for pos, _ in ordered:
        for sp in u.spans:
            if sp.start < pos < sp.end:
                raise ValueError(
                    f"insertion at {pos} inside span [{sp.start},{sp.end})")
    parts: list[str] = []
    last = 0
    for pos, ins in ordered:
        parts.append(u.text[last:pos])
        parts.append(ins)
        last = pos
    parts.append(u.text[last:])
    new_text = "".join(parts)
    new_spans = []
    for sp in u.spans:
        delta = sum(len(ins) for pos, ins in ordered if pos <= sp.start)
        new_spans.append(SpanAnnotation(sp.item, sp.start + delta,
                                        sp.end + delta))
    notes = [f"sd:type:{kind}"]
    notes += [f"sd:insert:{pos}:{ins}" for pos, ins in ordered]
    return make_record("sd", source, new_text, u.da, new_spans, notes)


def sample_interruption_points(toks: list[Token],
                               dist: DisfluencyDistributions,
                               rng: random.Random) -> list[int]:
    """Independently selected inter-token gaps; gap g follows toks[g]."""
    n_gaps = len(toks) - 1
    points: list[int] = []
    for g in range(n_gaps):
        decile = min(9, (10 * g) // n_gaps)
        p = dist.point_prob(toks[g].kind, decile)
        if rng.random() < p:
            points.append(g)
    return points


def inject_pauses(u: Utterance, points: list[int],
                  dist: DisfluencyDistributions, rng: random.Random,
                  source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """A sampled filler token after each interruption point."""
    toks = tokenize_with_spans(u.text, u.spans)
    insertions = []
    for g in points:
        filler = _weighted(rng, dist.fillers)
        insertions.append((toks[g].char_end, " " + filler))
    return _apply_insertions(u, insertions, "pause", source)


def inject_repeats(u: Utterance, points: list[int], rng: random.Random,
                   source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """Duplicate the 1-2 word tokens before each point, comma-separated.

    Points whose preceding token is not a plain word (atom or punct) are
    skipped: spans are never duplicated.
    """
    toks = tokenize_with_spans(u.text, u.spans)
    insertions = []
    for g in points:
        if toks[g].kind != WORD:
            continue
        width = rng.randint(1, 2)
        if width == 2 and g >= 1 and toks[g - 1].kind == WORD:
            repeated = toks[g - 1].surface + " " + toks[g].surface
        else:
            repeated = toks[g].surface
        insertions.append((toks[g].char_end, ", " + repeated))
    return _apply_insertions(u, insertions, "repeat", source)


def inject_restart(u: Utterance, dist: DisfluencyDistributions,
                   rng: random.Random,
                   source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """Prefix a false-start phrase to the utterance."""
    if not u.text.strip():
        raise NoCandidateError("nothing to restart in an empty utterance")
    term = _weighted(rng, dist.restart_terms)
    return _apply_insertions(u, [(0, term + " ")], "restart", source)


def inject_repair(u: Utterance, ontology: dict[str, list[str]],
                  dist: DisfluencyDistributions, rng: random.Random,
                  source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """Insert `<reparandum>, <edit term> ` before one annotated value.

    The reparandum is a different value of the same slot-key; the DA keeps
    the original value and the reparandum gets no span.
    """
    eligible: list[tuple[SpanAnnotation, list[str]]] = []
    for sp in u.spans:
        item = u.da[sp.item]
        if not item.slot or item.value == "?":
            continue
        canon = " ".join(item.value.lower().split())
        others = [v for v in ontology.get(slot_key(item.domain, item.slot), ())
                  if " ".join(v.lower().split()) != canon]
        if others:
            eligible.append((sp, others))
    if not eligible:
        raise NoRepairableSlotError("no span with an alternative value")
    sp, others = eligible[rng.randrange(len(eligible))]
    reparandum = rng.choice(others)
    edit_term = _weighted(rng, dist.edit_terms)
    insertion = f"{reparandum}, {edit_term} "
    return _apply_insertions(u, [(sp.start, insertion)], "repair", source)


def sd_augment(u: Utterance, ontology: dict[str, list[str]],
               dist: DisfluencyDistributions, rng: random.Random,
               source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """One disfluency type sampled from type_mix; repair falls back to
    pause when the utterance has no repairable slot."""
    weights = [dist.type_mix.get(t, 0.0) for t in SD_TYPES]
    kind = rng.choices(SD_TYPES, weights=weights)[0]
    toks = tokenize_with_spans(u.text, u.spans)
    if kind == "repair":
        try:
            return inject_repair(u, ontology, dist, rng, source=source)
        except NoRepairableSlotError:
            kind = "pause"
    if kind == "pause":
        points = sample_interruption_points(toks, dist, rng)
        return inject_pauses(u, points, dist, rng, source=source)
    if kind == "repeat":
        points = sample_interruption_points(toks, dist, rng)
        return inject_repeats(u, points, rng, source=source)
    return inject_restart(u, dist, rng, source=source)
