"""Dialog corpus model: load, validate, save, and example extraction.

The native format is a single JSON document:

    {"dialogs": [{"id": ..., "split": ..., "turns": [...]}, ...],
     "ontology": {"domain-slot": ["value", ...], ...}}

Each turn carries a speaker, raw text, a dialog act (list of domain/intent/
slot/value items), and character-offset span annotations pointing at the
items whose value is quoted verbatim in the text. Offsets count characters,
not bytes. Dialogs that break structural invariants are quarantined on load
(kept, flagged, excluded from extraction) unless strict mode asks for an
exception instead.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import CorpusFormatError, CorpusValidationError

SPEAKER_USER = "user"
SPEAKER_SYSTEM = "system"
SPLITS = ("train", "validation", "test")


def norm_text(s: str) -> str:
    """Canonical form for comparisons: lowercase, whitespace collapsed."""
    return " ".join(s.lower().split())


def slot_key(domain: str, slot: str) -> str:
    return f"{domain.strip().lower()}-{slot.strip().lower()}"


@dataclass(frozen=True, eq=False)
class DialogActItem:
    """One (domain, intent, slot, value) entry of a dialog act.

    domain/intent/slot are lowercase tokens; slot may be empty for slotless
    intents (then value must be empty too). value "?" marks a requested slot.
    Equality and hashing use the canonical (case/whitespace-insensitive
    value) form.
    """

    domain: str
    intent: str
    slot: str = ""
    value: str = ""

    def __post_init__(self):
        object.__setattr__(self, "domain", self.domain.strip().lower())
        object.__setattr__(self, "intent", self.intent.strip().lower())
        object.__setattr__(self, "slot", self.slot.strip().lower())
        object.__setattr__(self, "value", self.value.strip())
        if not self.domain or not self.intent:
            raise ValueError("dialog act item needs domain and intent")
        if self.slot and not self.value:
            raise ValueError(f"slot {self.slot!r} has empty value")
        if not self.slot and self.value:
            raise ValueError(f"value {self.value!r} without a slot")

    def key(self) -> tuple[str, str, str, str]:
        return (self.domain, self.intent, self.slot, norm_text(self.value))

    def __eq__(self, other):
        if not isinstance(other, DialogActItem):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def replace_value(self, value: str) -> "DialogActItem":
        return DialogActItem(self.domain, self.intent, self.slot, value)


@dataclass(frozen=True)
class SpanAnnotation:
    """Half-open character range [start, end) quoting da[item]'s value."""

    item: int
    start: int
    end: int


@dataclass(frozen=True)
class Utterance:
    speaker: str
    text: str
    da: tuple[DialogActItem, ...] = ()
    spans: tuple[SpanAnnotation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "da", tuple(self.da))
        object.__setattr__(
            self, "spans", tuple(sorted(self.spans, key=lambda s: s.start)))
        if self.speaker not in (SPEAKER_USER, SPEAKER_SYSTEM):
            raise ValueError(f"unknown speaker {self.speaker!r}")


def validate_utterance(u: Utterance) -> list[str]:
    """All invariant violations of one utterance, as human-readable strings."""
    problems: list[str] = []
    if u.speaker == SPEAKER_SYSTEM and u.da:
        problems.append("system turn carries a dialog act")
    seen = set()
    for i, item in enumerate(u.da):
        k = item.key()
        if k in seen:
            problems.append(f"duplicate dialog act item {k}")
        seen.add(k)
    n = len(u.text)
    last_end = -1
    claimed: set[int] = set()
    for sp in u.spans:
        if not (0 <= sp.item < len(u.da)):
            problems.append(f"span references missing item {sp.item}")
            continue
        item = u.da[sp.item]
        if not item.slot or item.value == "?":
            problems.append(
                f"span on item {sp.item} which has no concrete value")
        if not (0 <= sp.start < sp.end <= n):
            problems.append(
                f"span [{sp.start},{sp.end}) outside text of length {n}")
            continue
        if sp.start < last_end:
            problems.append(f"span [{sp.start},{sp.end}) overlaps previous")
        last_end = max(last_end, sp.end)
        if sp.item in claimed:
            problems.append(f"item {sp.item} annotated by two spans")
        claimed.add(sp.item)
        if item.slot and item.value != "?":
            if norm_text(u.text[sp.start:sp.end]) != norm_text(item.value):
                problems.append(
                    f"span text {u.text[sp.start:sp.end]!r} does not match "
                    f"value {item.value!r}")
    return problems


@dataclass
class Dialog:
    id: str
    split: str
    turns: list[Utterance]
    meta: dict | None = None
    quarantined: bool = field(default=False, compare=False)

    def user_turns(self) -> Iterator[tuple[int, Utterance]]:
        for i, t in enumerate(self.turns):
            if t.speaker == SPEAKER_USER:
                yield i, t


def validate_dialog(d: Dialog) -> list["ValidationIssue"]:
    issues: list[ValidationIssue] = []
    if d.split not in SPLITS:
        issues.append(ValidationIssue(d.id, None, f"unknown split {d.split!r}"))
    if not d.turns:
        issues.append(ValidationIssue(d.id, None, "dialog has no turns"))
        return issues
    if d.turns[0].speaker != SPEAKER_USER:
        issues.append(ValidationIssue(d.id, 0, "first turn is not the user"))
    for i in range(1, len(d.turns)):
        if d.turns[i].speaker == d.turns[i - 1].speaker:
            issues.append(
                ValidationIssue(d.id, i, "speakers do not alternate"))
    for i, t in enumerate(d.turns):
        for msg in validate_utterance(t):
            issues.append(ValidationIssue(d.id, i, msg))
    return issues


@dataclass(frozen=True)
class ValidationIssue:
    dialog_id: str
    turn_index: int | None
    message: str


@dataclass
class Corpus:
    dialogs: list[Dialog]
    ontology: dict[str, list[str]] = field(default_factory=dict)
    issues: list[ValidationIssue] = field(default_factory=list, compare=False)

    def active_dialogs(self) -> list[Dialog]:
        return [d for d in self.dialogs if not d.quarantined]

    def split_dialogs(self, split: str) -> list[Dialog]:
        return [d for d in self.active_dialogs() if d.split == split]

    def ontology_values(self, key: str) -> list[str]:
        return list(self.ontology.get(key, ()))


def add_ontology_value(ontology: dict[str, list[str]], key: str, value: str):
    vals = ontology.setdefault(key, [])
    canon = norm_text(value)
    for v in vals:
        if norm_text(v) == canon:
            return
    vals.append(value)


def ingest_ontology(corpus: Corpus) -> None:
    """Insert every span-annotated value into its slot's ontology list."""
    for d in corpus.active_dialogs():
        for t in d.turns:
            for sp in t.spans:
                item = t.da[sp.item]
                if item.slot and item.value != "?":
                    add_ontology_value(
                        corpus.ontology,
                        slot_key(item.domain, item.slot), item.value)


def _parse_item(obj, where: str) -> DialogActItem:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"{where}: dialog act item is not an object")
    try:
        return DialogActItem(
            domain=str(obj.get("domain", "")),
            intent=str(obj.get("intent", "")),
            slot=str(obj.get("slot", "")),
            value=str(obj.get("value", "")))
    except ValueError as e:
        raise CorpusFormatError(f"{where}: {e}") from e


def _parse_turn(obj, where: str) -> Utterance:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"{where}: turn is not an object")
    speaker = obj.get("speaker")
    text = obj.get("text")
    if speaker not in (SPEAKER_USER, SPEAKER_SYSTEM):
        raise CorpusFormatError(f"{where}: bad speaker {speaker!r}")
    if not isinstance(text, str):
        raise CorpusFormatError(f"{where}: text must be a string")
    da = obj.get("da", [])
    spans = obj.get("spans", [])
    if not isinstance(da, list) or not isinstance(spans, list):
        raise CorpusFormatError(f"{where}: da and spans must be lists")
    items = tuple(_parse_item(o, where) for o in da)
    anns = []
    for o in spans:
        if not isinstance(o, dict):
            raise CorpusFormatError(f"{where}: span is not an object")
        try:
            anns.append(SpanAnnotation(
                item=int(o["item"]), start=int(o["start"]),
                end=int(o["end"])))
        except (KeyError, TypeError, ValueError) as e:
            raise CorpusFormatError(f"{where}: bad span {o!r}") from e
    return Utterance(speaker=speaker, text=text, da=items, spans=tuple(anns))


def _parse_dialog(obj, index: int) -> Dialog:
    if not isinstance(obj, dict):
        raise CorpusFormatError(f"dialog #{index} is not an object")
    did = obj.get("id")
    if not isinstance(did, str) or not did:
        raise CorpusFormatError(f"dialog #{index} has no id")
    split = obj.get("split")
    if not isinstance(split, str):
        raise CorpusFormatError(f"dialog {did}: split must be a string")
    turns_obj = obj.get("turns")
    if not isinstance(turns_obj, list):
        raise CorpusFormatError(f"dialog {did}: turns must be a list")
    turns = [_parse_turn(t, f"dialog {did}, turn {i}")
             for i, t in enumerate(turns_obj)]
    meta = obj.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise CorpusFormatError(f"dialog {did}: meta must be an object")
    return Dialog(id=did, split=split, turns=turns, meta=meta)


def load_corpus(path: str | os.PathLike, strict: bool = False) -> Corpus:
    """Read a native-format corpus file.

    Structural problems (unparseable JSON, missing keys, malformed spans)
    raise CorpusFormatError. Semantic invariant violations quarantine the
    dialog and are recorded on corpus.issues; with strict=True the first
    violation raises CorpusValidationError instead.
    """
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise CorpusFormatError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(doc, dict) or not isinstance(doc.get("dialogs"), list):
        raise CorpusFormatError(f"{path}: top level must contain 'dialogs'")
    dialogs = [_parse_dialog(obj, i) for i, obj in enumerate(doc["dialogs"])]
    seen_ids = set()
    for d in dialogs:
        if d.id in seen_ids:
            raise CorpusFormatError(f"duplicate dialog id {d.id!r}")
        seen_ids.add(d.id)

    ontology: dict[str, list[str]] = {}
    onto_obj = doc.get("ontology", {})
    if not isinstance(onto_obj, dict):
        raise CorpusFormatError(f"{path}: ontology must be an object")
    for key, vals in onto_obj.items():
        if not isinstance(vals, list):
            raise CorpusFormatError(f"{path}: ontology[{key!r}] not a list")
        for v in vals:
            add_ontology_value(ontology, str(key).lower(), str(v))

    all_issues: list[ValidationIssue] = []
    for d in dialogs:
        issues = validate_dialog(d)
        if issues:
            if strict:
                first = issues[0]
                raise CorpusValidationError(
                    first.message, dialog_id=first.dialog_id,
                    turn_index=first.turn_index)
            d.quarantined = True
            all_issues.extend(issues)
    corpus = Corpus(dialogs=dialogs, ontology=ontology, issues=all_issues)
    ingest_ontology(corpus)
    return corpus


def corpus_to_obj(corpus: Corpus) -> dict:
    dialogs = []
    for d in corpus.dialogs:
        turns = []
        for t in d.turns:
            obj: dict = {"speaker": t.speaker, "text": t.text}
            obj["da"] = [
                {"domain": it.domain, "intent": it.intent,
                 "slot": it.slot, "value": it.value} for it in t.da]
            obj["spans"] = [
                {"item": s.item, "start": s.start, "end": s.end}
                for s in t.spans]
            turns.append(obj)
        dobj: dict = {"id": d.id, "split": d.split, "turns": turns}
        if d.meta is not None:
            dobj["meta"] = d.meta
        dialogs.append(dobj)
    return {"dialogs": dialogs, "ontology": dict(corpus.ontology)}


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write text to path via a temp file + rename in the same directory."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".laug-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def save_corpus(corpus: Corpus, path: str | os.PathLike) -> None:
    text = json.dumps(corpus_to_obj(corpus), ensure_ascii=False, indent=2)
    atomic_write_text(path, text + "\n")


@dataclass(frozen=True)
class LuExample:
    """One evaluation unit: a context window ending in the user turn.

    context holds up to m+1 (speaker, text) pairs; the last one is the user
    turn being understood.
    """

    context: tuple[tuple[str, str], ...]
    gold: tuple[DialogActItem, ...]
    source: tuple[str, int]

    @property
    def text(self) -> str:
        return self.context[-1][1]


def extract_lu_examples(corpus: Corpus, m: int = 2,
                        split: str | None = None) -> list[LuExample]:
    """One example per user turn; context = up to m preceding utterances
    plus the turn itself.

    Augmented corpora store single-turn dialogs whose meta carries the
    source context; the window is rebuilt from that.
    """
    out: list[LuExample] = []
    for d in corpus.active_dialogs():
        if split is not None and d.split != split:
            continue
        prior: list[tuple[str, str]] = []
        if d.meta and isinstance(d.meta.get("context"), list):
            prior = [(str(s), str(t)) for s, t in d.meta["context"]]
        history = list(prior)
        for i, t in enumerate(d.turns):
            if t.speaker == SPEAKER_USER:
                ctx = tuple(history[-m:]) if m > 0 else ()
                src = (d.id, i)
                if d.meta and "source" in d.meta:
                    sd, si = d.meta["source"]
                    src = (str(sd), int(si))
                out.append(LuExample(
                    context=ctx + ((t.speaker, t.text),),
                    gold=t.da, source=src))
            history.append((t.speaker, t.text))
    return out


def load_multiwoz(path: str | os.PathLike,
                  split_map: dict[str, str] | None = None,
                  strict: bool = False) -> Corpus:
    """Adapt a MultiWOZ-style data.json into the native model.

    Expects {dialog_id: {"log": [{"text", "dialog_act", "span_info"}, ...]}}.
    Even log positions are user turns. Word-index spans are converted to
    character offsets against a whitespace tokenization of the text. System
    dialog acts are dropped (only user-side understanding is modeled).
    split_map assigns dialog ids to splits; unlisted ids land in "train".
    """
    try:
        with open(path, encoding="utf-8") as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise CorpusFormatError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(doc, dict):
        raise CorpusFormatError(f"{path}: expected an object of dialogs")
    dialogs = []
    for did in doc:
        entry = doc[did]
        log = entry.get("log") if isinstance(entry, dict) else None
        if not isinstance(log, list):
            raise CorpusFormatError(f"dialog {did}: missing log")
        turns = []
        for pos, rec in enumerate(log):
            text = str(rec.get("text", ""))
            speaker = SPEAKER_USER if pos % 2 == 0 else SPEAKER_SYSTEM
            if speaker == SPEAKER_SYSTEM:
                turns.append(Utterance(speaker=speaker, text=text))
                continue
            items: list[DialogActItem] = []
            acts = rec.get("dialog_act", {})
            if isinstance(acts, dict):
                for act_key, pairs in acts.items():
                    head, _, tail = str(act_key).partition("-")
                    domain, intent = head.lower(), tail.lower()
                    if not intent:
                        continue
                    for pair in pairs:
                        slot = str(pair[0])
                        value = str(pair[1]) if len(pair) > 1 else ""
                        if slot.lower() == "none":
                            slot = ""
                        if value.lower() == "none":
                            value = ""
                        try:
                            item = DialogActItem(domain, intent, slot, value)
                        except ValueError:
                            continue
                        if item not in items:
                            items.append(item)
            spans = _multiwoz_spans(text, rec.get("span_info", []), items)
            turns.append(Utterance(
                speaker=speaker, text=text, da=tuple(items),
                spans=tuple(spans)))
        split = (split_map or {}).get(did, "train")
        dialogs.append(Dialog(id=did, split=split, turns=turns))

    all_issues: list[ValidationIssue] = []
    for d in dialogs:
        issues = validate_dialog(d)
        if issues:
            if strict:
                first = issues[0]
                raise CorpusValidationError(
                    first.message, dialog_id=first.dialog_id,
                    turn_index=first.turn_index)
            d.quarantined = True
            all_issues.extend(issues)
    corpus = Corpus(dialogs=dialogs, ontology={}, issues=all_issues)
    ingest_ontology(corpus)
    return corpus


def _multiwoz_spans(text: str, span_info,
                    items: list[DialogActItem]) -> list[SpanAnnotation]:
    if not isinstance(span_info, list):
        return []
    # char offsets of whitespace-separated words
    offsets: list[tuple[int, int]] = []
    pos = 0
    for w in text.split():
        start = text.index(w, pos)
        offsets.append((start, start + len(w)))
        pos = start + len(w)
    spans: list[SpanAnnotation] = []
    used: set[int] = set()
    for row in span_info:
        try:
            act_key, slot, value, ws, we = row[0], row[1], row[2], int(row[3]), int(row[4])
        except (IndexError, TypeError, ValueError):
            continue
        if not (0 <= ws <= we < len(offsets)):
            continue
        head, _, tail = str(act_key).partition("-")
        domain, intent = head.lower(), tail.lower()
        slot = str(slot).lower()
        value = str(value)
        idx = None
        for i, item in enumerate(items):
            if i in used:
                continue
            if (item.domain == domain and item.intent == intent
                    and item.slot == slot
                    and norm_text(item.value) == norm_text(value)):
                idx = i
                break
        if idx is None:
            try:
                items.append(DialogActItem(domain, intent, slot, value))
            except ValueError:
                continue
            idx = len(items) - 1
        used.add(idx)
        spans.append(SpanAnnotation(
            item=idx, start=offsets[ws][0], end=offsets[we][1]))
    return spans
