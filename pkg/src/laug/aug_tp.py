"""Paraphrase pipeline: serialize the dialog act, ask a generator for
candidates, then validate, repair values, and filter.

The generator is pluggable: an HTTP client for an externally hosted
paraphrase model, plus a deterministic template generator usable offline.
Validation guarantees the accepted record keeps the dialog act unchanged,
with every value present verbatim.
"""

from __future__ import annotations

import json
import random
import re
import urllib.error
import urllib.request
from dataclasses import dataclass

from .corpus import Dialog, DialogActItem, SpanAnnotation, Utterance, \
    norm_text, slot_key, SPEAKER_USER
from .errors import GeneratorUnavailableError
from .records import AugmentationRecord, make_record
from .textkit import detect_value


@dataclass(frozen=True)
class SerializedDa:
    """Flat text form `domain [*] { intent ( slot = value ; ... ) ... }`."""

    text: str
    items: tuple[DialogActItem, ...]
    starred: frozenset[str]


def serialize_da(da, first_mention) -> SerializedDa:
    """Group items by domain (alphabetical), intents alphabetical within a
    domain, slots in annotation order; '*' marks first-mention domains."""
    items = tuple(da)
    if not items:
        raise ValueError("cannot serialize an empty dialog act")
    starred = frozenset(d for d in first_mention)
    domains = sorted({it.domain for it in items})
    parts: list[str] = []
    for dom in domains:
        intents = sorted({it.intent for it in items if it.domain == dom})
        groups: list[str] = []
        for intent in intents:
            fields = [f"{it.slot} = {it.value}" for it in items
                      if it.domain == dom and it.intent == intent and it.slot]
            body = " ; ".join(fields)
            groups.append(f"{intent} ( {body} )" if body
                          else f"{intent} ( )")
        star = "* " if dom in starred else ""
        parts.append(f"{dom} {star}{{ {' '.join(groups)} }}")
    return SerializedDa(text=" ".join(parts), items=items, starred=starred)


_DOMAIN_RE = re.compile(r"(\S+)\s+(\*\s+)?\{\s*(.*?)\s*\}")
_INTENT_RE = re.compile(r"(\S+)\s+\(\s*(.*?)\s*\)")


def parse_serialized_da(text: str) -> tuple[tuple[DialogActItem, ...],
                                            frozenset[str]]:
    """Inverse of serialize_da (values must not contain braces or ')')."""
    items: list[DialogActItem] = []
    starred: set[str] = set()
    for dm in _DOMAIN_RE.finditer(text):
        domain, star, body = dm.group(1), dm.group(2), dm.group(3)
        if star:
            starred.add(domain)
        for im in _INTENT_RE.finditer(body):
            intent, fields = im.group(1), im.group(2)
            if not fields:
                items.append(DialogActItem(domain, intent))
                continue
            for part in fields.split(";"):
                slot, _, value = part.strip().partition(" = ")
                items.append(DialogActItem(domain, intent, slot.strip(),
                                           value.strip()))
    return tuple(items), frozenset(starred)


def first_mention_domains(d: Dialog, turn_index: int) -> set[str]:
    """Domains of this turn's DA that no earlier turn mentioned."""
    prior: set[str] = set()
    for t in d.turns[:turn_index]:
        prior.update(it.domain for it in t.da)
    current = {it.domain for it in d.turns[turn_index].da}
    return current - prior


_SLOT_PHRASES = {
    "dest": "going to {v}",
    "destination": "going to {v}",
    "depart": "leaving from {v}",
    "departure": "leaving from {v}",
    "arrive": "arriving by {v}",
    "leave": "leaving at {v}",
    "day": "on {v}",
    "people": "for {v} people",
    "time": "at {v}",
    "food": "serving {v} food",
    "area": "in the {v} part of town",
    "price": "in the {v} price range",
    "stars": "rated {v} stars",
    "type": "of the {v} variety",
    "name": "called {v}",
}

_STARRED_SCAFFOLDS = (
    "Hi there, I am looking for a {domain} {phrases}.",
    "Hi, I need to find a {domain} {phrases}, can you assist?",
    "Good day, I would like a {domain} {phrases} if you can manage it.",
)
_PLAIN_SCAFFOLDS = (
    "Yes, {phrases}.",
    "{phrases}, please.",
    "Okay, {phrases} then.",
)
_STARRED_REQUEST = (
    "Could you also tell me the {slots} of the {domain}?",
    "And would you give me the {slots} for that {domain}?",
)
_PLAIN_REQUEST = (
    "What is the {slots}?",
    "And the {slots}?",
)
_SLOTLESS = {
    "thank": ("You have been very helpful, that is everything I needed.",
              "Great, that covers it all for me."),
    "bye": ("That will be all, goodbye.",
            "Goodbye for now."),
    "greet": ("Hi there, I could use some assistance.",
              "Good morning, I am hoping you can assist me."),
}
_SLOTLESS_DEFAULT = ("Alright, noted.", "Okay, very well.")


def _join_phrases(phrases: list[str]) -> str:
    if len(phrases) == 1:
        return phrases[0]
    return ", ".join(phrases[:-1]) + " and " + phrases[-1]


class TemplateParaphraser:
    """Deterministic fallback generator.

    Starred domains get full-sentence scaffolds, unstarred get elliptical
    ones; every value is embedded verbatim.
    """

    def generate(self, sda: SerializedDa, context: list[str],
                 k: int) -> list[str]:
        out: list[str] = []
        for style in range(max(1, k)):
            cand = self._one(sda, style)
            if cand and cand not in out:
                out.append(cand)
            if len(out) >= k:
                break
        return out

    def _one(self, sda: SerializedDa, style: int) -> str:
        sentences: list[str] = []
        for dom in sorted({it.domain for it in sda.items}):
            starred = dom in sda.starred
            informs = [it for it in sda.items
                       if it.domain == dom and it.slot and it.value != "?"]
            requests = [it for it in sda.items
                        if it.domain == dom and it.value == "?"]
            slotless = [it for it in sda.items
                        if it.domain == dom and not it.slot]
            if informs:
                phrases = [
                    _SLOT_PHRASES.get(it.slot, "with " + it.slot +
                                      " being {v}").replace("{v}", it.value)
                    for it in informs]
                scaffolds = _STARRED_SCAFFOLDS if starred \
                    else _PLAIN_SCAFFOLDS
                tmpl = scaffolds[style % len(scaffolds)]
                s = tmpl.replace("{domain}", dom).replace(
                    "{phrases}", _join_phrases(phrases))
                sentences.append(s[0].upper() + s[1:])
            if requests:
                slots = " and the ".join(it.slot for it in requests)
                scaffolds = _STARRED_REQUEST if starred else _PLAIN_REQUEST
                sentences.append(scaffolds[style % len(scaffolds)]
                                 .replace("{slots}", slots)
                                 .replace("{domain}", dom))
            for it in slotless:
                options = _SLOTLESS.get(it.intent, _SLOTLESS_DEFAULT)
                sentences.append(options[style % len(options)])
        return " ".join(sentences)


class HttpParaphraser:
    """Client for an external paraphrase service.

    Wire contract: POST {"da": str, "context": [str], "k": int} to the
    endpoint; response {"candidates": [str]}. Any transport or protocol
    failure raises GeneratorUnavailableError.
    """

    def __init__(self, endpoint: str, timeout: float = 30.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def generate(self, sda: SerializedDa, context: list[str],
                 k: int) -> list[str]:
        payload = json.dumps(
            {"da": sda.text, "context": list(context), "k": int(k)}
        ).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=payload,
            headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                body = resp.read()
        except (urllib.error.URLError, OSError) as e:
            raise GeneratorUnavailableError(
                f"paraphrase endpoint {self.endpoint} failed: {e}") from e
        try:
            doc = json.loads(body.decode("utf-8"))
            cands = doc["candidates"]
        except (ValueError, KeyError, TypeError) as e:
            raise GeneratorUnavailableError(
                f"malformed response from {self.endpoint}") from e
        if not isinstance(cands, list) or any(
                not isinstance(c, str) or not c for c in cands):
            raise GeneratorUnavailableError(
                f"malformed candidates from {self.endpoint}")
        return cands[:k]


def validate_and_repair(candidate: str, original: Utterance,
                        ontology: dict[str, list[str]],
                        threshold: float = 0.9,
                        source: tuple[str, int] = ("", 0)
                        ) -> AugmentationRecord | None:
    """Accept, fix, or reject one candidate paraphrase.

    Every original span value must be detectable at the threshold; detected
    windows scoring below 1.0 are spliced back to the original surface.
    Candidates mentioning out-of-DA ontology values (>= 4 chars) are
    rejected as redundant. Accepted output keeps the DA unchanged.
    """
    text = candidate
    notes: list[str] = []
    for sp in original.spans:
        value = original.da[sp.item].value
        m = detect_value(text, value, threshold)
        if m is None:
            return None
        if m.score < 1.0:
            notes.append(f"tp:repair:{text[m.start:m.end]}->{value}")
            text = text[:m.start] + value + text[m.end:]

    da_keys = {slot_key(it.domain, it.slot) for it in original.da if it.slot}
    da_values = {norm_text(it.value) for it in original.da
                 if it.slot and it.value != "?"}
    for key in ontology:
        if key in da_keys:
            continue
        for val in ontology[key]:
            if len(val) < 4 or norm_text(val) in da_values:
                continue
            if re.search(rf"(?<!\w){re.escape(val)}(?!\w)", text,
                         re.IGNORECASE):
                return None

    claimed: list[tuple[int, int]] = []
    spans: list[SpanAnnotation] = []
    for sp in original.spans:
        value = original.da[sp.item].value
        m = detect_value(text, value, 1.0,
                         exclude=claimed)
        if m is None:
            return None
        claimed.append((m.start, m.end))
        spans.append(SpanAnnotation(sp.item, m.start, m.end))
    return make_record("tp", source, text, original.da, spans, notes)


def tp_augment(d: Dialog, turn_index: int, gen, rng: random.Random,
               ontology: dict[str, list[str]], k: int = 5,
               threshold: float = 0.9, context_window: int = 2,
               source: tuple[str, int] | None = None
               ) -> AugmentationRecord | None:
    """First accepted candidate differing from the original text, or None."""
    u = d.turns[turn_index]
    if u.speaker != SPEAKER_USER or not u.da:
        raise ValueError("tp_augment needs an annotated user turn")
    sda = serialize_da(u.da, first_mention_domains(d, turn_index))
    lo = max(0, turn_index - context_window)
    context = [t.text for t in d.turns[lo:turn_index]]
    src = source if source is not None else (d.id, turn_index)
    for cand in gen.generate(sda, context, k)[:k]:
        rec = validate_and_repair(cand, u, ontology, threshold, source=src)
        if rec is not None and rec.text != u.text:
            return rec
    return None
