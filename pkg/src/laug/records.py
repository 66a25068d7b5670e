"""AugmentationRecord: one perturbed utterance plus where it came from."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import (Corpus, Dialog, DialogActItem, SpanAnnotation, Utterance,
                     SPEAKER_USER, validate_utterance)

METHODS = ("wp", "tp", "sr", "sd")


@dataclass(frozen=True)
class AugmentationRecord:
    method: str
    source: tuple[str, int]
    text: str
    da: tuple[DialogActItem, ...]
    spans: tuple[SpanAnnotation, ...]
    notes: tuple[str, ...] = ()

    def as_utterance(self) -> Utterance:
        return Utterance(speaker=SPEAKER_USER, text=self.text,
                         da=self.da, spans=self.spans)


def make_record(method: str, source: tuple[str, int], text: str,
                da, spans, notes) -> AugmentationRecord:
    """Build a record, enforcing the utterance invariants on the result."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    rec = AugmentationRecord(
        method=method, source=(str(source[0]), int(source[1])), text=text,
        da=tuple(da), spans=tuple(sorted(spans, key=lambda s: s.start)),
        notes=tuple(notes))
    problems = validate_utterance(rec.as_utterance())
    if problems:
        raise ValueError(
            f"{method} produced an inconsistent record: {problems[0]}")
    return rec


def record_to_dialog(rec: AugmentationRecord, rec_id: str, split: str,
                     context: list[tuple[str, str]]) -> Dialog:
    """Package a record as a standalone single-turn dialog.

    The source turn's preceding utterances ride along in meta so windowed
    examples can be rebuilt.
    """
    meta = {
        "method": rec.method,
        "source": [rec.source[0], rec.source[1]],
        "context": [[s, t] for s, t in context],
        "notes": list(rec.notes),
    }
    turn = rec.as_utterance()
    return Dialog(id=rec_id, split=split, turns=[turn], meta=meta)


def records_from_corpus(aug: Corpus) -> list[AugmentationRecord]:
    """Recover records from a corpus of packaged single-turn dialogs."""
    out: list[AugmentationRecord] = []
    for d in aug.active_dialogs():
        if not d.meta or "method" not in d.meta or len(d.turns) != 1:
            continue
        t = d.turns[0]
        src = d.meta.get("source", [d.id, 0])
        out.append(AugmentationRecord(
            method=str(d.meta["method"]), source=(str(src[0]), int(src[1])),
            text=t.text, da=t.da, spans=t.spans,
            notes=tuple(str(n) for n in d.meta.get("notes", ()))))
    return out
