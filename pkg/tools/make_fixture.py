#!/usr/bin/env python3
"""Generate the bundled corpora: mini_corpus.json and fixture_corpus.json.

Fully deterministic (value choices cycle through fixed lists), so
re-running reproduces the checked-in files byte for byte. Also asserts the
lexical hygiene the resource files and the lexicon-LU baseline rely on:

  * ontology values are globally unique and never word-boundary substrings
    of another slot-key's values or of any template/scaffold literal;
  * thesaurus synonyms never collide with values or intent keywords;
  * unseen-value pools are disjoint from the full ontology;
  * every annotated slot-key has a replacement pool and at least two
    distinct ontology values.
"""

from __future__ import annotations

import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from laug import aug_tp  # noqa: E402
from laug.corpus import (Corpus, Dialog, DialogActItem,  # noqa: E402
                         SpanAnnotation, Utterance, ingest_ontology,
                         load_corpus, norm_text, save_corpus)
from laug.resources import data_path, load_thesaurus, \
    load_unseen_values  # noqa: E402

DATA = ROOT / "src" / "laug" / "data"

VALUES = {
    "train-dest": ["cambridge", "london", "birmingham", "norwich",
                   "peterborough"],
    "train-day": ["monday", "tuesday", "wednesday", "thursday", "sunday"],
    "train-leave": ["05:15", "06:30", "07:45", "08:00", "09:05"],
    "taxi-depart": ["the gandhi", "kirkwood house", "avalon guest house",
                    "finches bed and breakfast", "worth house"],
    "taxi-dest": ["pizza hut fen ditton", "the golden palace",
                  "the river bar", "la margherita", "curry prince"],
    "taxi-arrive": ["11:15", "12:30", "13:45", "14:00", "10:20"],
    "restaurant-price": ["cheap", "moderate", "expensive"],
    "restaurant-food": ["chinese", "italian", "indian", "british", "thai"],
    "restaurant-people": ["6", "7", "8"],
    "restaurant-time": ["17:15", "18:30", "19:45", "20:00", "21:10"],
    "hotel-stars": ["2", "3", "4", "5"],
    "hotel-area": ["north", "south", "east", "west", "centre"],
    "attraction-type": ["museum", "cinema", "theatre", "nightclub"],
    "attraction-name": ["clare hall", "the corn exchange", "byard art",
                        "castle mound"],
}

# tokens the lexicon-LU baseline learns as slot-less intent keywords
KEYWORDS = {"thank", "perfect", "goodbye", "everything", "today",
            "hello", "planning", "trip", "help"}

_counters: dict[str, int] = {}


def pick(key: str) -> str:
    i = _counters.get(key, 0)
    _counters[key] = i + 1
    vals = VALUES[key]
    return vals[i % len(vals)]


def turn(speaker: str, *parts) -> Utterance:
    """Assemble an utterance from literals and value/label markers.

    parts: str literal | ("val", domain, intent, slot, value) spanned |
    ("da", domain, intent, slot, value) label-only.
    """
    text = ""
    da: list[DialogActItem] = []
    spans: list[SpanAnnotation] = []
    for p in parts:
        if isinstance(p, str):
            text += p
            continue
        kind, domain, intent, slot, value = p
        item = DialogActItem(domain, intent, slot, value)
        if kind == "val":
            start = len(text)
            text += value
            spans.append(SpanAnnotation(len(da), start, len(text)))
        da.append(item)
    return Utterance(speaker, text, tuple(da), tuple(spans))


def shape_a() -> Utterance:
    return turn("user", "I want to book a train to ",
                ("val", "train", "inform", "dest", pick("train-dest")),
                " on ",
                ("val", "train", "inform", "day", pick("train-day")),
                ", leaving at ",
                ("val", "train", "inform", "leave", pick("train-leave")),
                ".")


def shape_b() -> Utterance:
    return turn("user", "I need a taxi from ",
                ("val", "taxi", "inform", "depart", pick("taxi-depart")),
                " to ",
                ("val", "taxi", "inform", "dest", pick("taxi-dest")),
                " by ",
                ("val", "taxi", "inform", "arrive", pick("taxi-arrive")),
                ".")


def shape_c() -> Utterance:
    return turn("user", "I am looking for a ",
                ("val", "restaurant", "inform", "price",
                 pick("restaurant-price")),
                " ",
                ("val", "restaurant", "inform", "food",
                 pick("restaurant-food")),
                " restaurant for ",
                ("val", "restaurant", "inform", "people",
                 pick("restaurant-people")),
                " people at ",
                ("val", "restaurant", "inform", "time",
                 pick("restaurant-time")),
                ".")


def shape_d() -> Utterance:
    return turn("user", "I need a ",
                ("val", "hotel", "inform", "stars", pick("hotel-stars")),
                " star hotel in the ",
                ("val", "hotel", "inform", "area", pick("hotel-area")),
                " part of town.")


def shape_e() -> Utterance:
    return turn("user", "I am looking for a ",
                ("val", "attraction", "inform", "type",
                 pick("attraction-type")),
                " in the city.")


def shape_f() -> Utterance:
    return turn("user", "Tell me about ",
                ("val", "attraction", "inform", "name",
                 pick("attraction-name")),
                ".")


def shape_g() -> Utterance:
    return turn("user", "Thank you very much, that was perfect.",
                ("da", "general", "thank", "", ""))


def shape_h() -> Utterance:
    return turn("user", "Goodbye, that is everything for today.",
                ("da", "general", "bye", "", ""))


def shape_i() -> Utterance:
    return turn("user", "Hello, I am planning a trip and need some help.",
                ("da", "general", "greet", "", ""))


def shape_j() -> Utterance:
    return turn("user", "What is the address and the phone number?",
                ("da", "hotel", "request", "address", "?"),
                ("da", "hotel", "request", "phone", "?"))


SHAPES = {"A": shape_a, "B": shape_b, "C": shape_c, "D": shape_d,
          "E": shape_e, "F": shape_f, "G": shape_g, "H": shape_h,
          "I": shape_i, "J": shape_j}

TEMPLATE_LITERALS = [
    "I want to book a train to", "on", "leaving at",
    "I need a taxi from", "to", "by",
    "I am looking for a", "restaurant for", "people at",
    "I need a", "star hotel in the", "part of town",
    "in the city", "Tell me about",
    "Thank you very much, that was perfect.",
    "Goodbye, that is everything for today.",
    "Hello, I am planning a trip and need some help.",
    "What is the address and the phone number?",
]

SYS_MID = ["Okay, let me check.", "Sure, one moment please.",
           "Certainly, checking the options now.",
           "Alright, searching right away."]
SYS_END = ["You are welcome.", "Happy to help.", "Done, enjoy your stay.",
           "Glad to assist."]

FIRST_TRAIN = ["A", "B", "C", "D", "E", "F", "I"]
SECOND_TRAIN = ["C", "D", "G", "A", "B", "H", "J"]
FIRST_TEST = ["A", "B", "C", "D", "E", "F"]
SECOND_TEST = ["B", "C", "D", "A", "G", "C", "A", "B", "D", "H"]


def build_fixture() -> Corpus:
    dialogs: list[Dialog] = []
    n = 0

    def add(split: str, first: str, second: str):
        nonlocal n
        turns = [SHAPES[first](), Utterance("system", SYS_MID[n % 4]),
                 SHAPES[second](), Utterance("system", SYS_END[n % 4])]
        dialogs.append(Dialog(id=f"fx{n:03d}", split=split, turns=turns))
        n += 1

    for i in range(70):
        add("train", FIRST_TRAIN[i % 7], SECOND_TRAIN[(i + 3) % 7])
    for i in range(10):
        add("validation", FIRST_TRAIN[i % 7], SECOND_TRAIN[(i + 5) % 7])
    for i in range(20):
        add("test", FIRST_TEST[i % 6], SECOND_TEST[i % 10])
    return Corpus(dialogs=dialogs)


def build_mini() -> Corpus:
    d1 = Dialog("mini-001", "train", [
        turn("user", "I want to go to ",
             ("val", "train", "inform", "dest", "Cambridge"), " ."),
        Utterance("system", "When would you like to leave ?"),
        turn("user", "I would like to leave at ",
             ("val", "train", "inform", "leave", "08:45"),
             " and arrive by ",
             ("val", "train", "inform", "arrive", "20:45"), " ."),
        Utterance("system", "Booked ."),
    ])
    d2 = Dialog("mini-002", "train", [
        turn("user", "Can you book the ",
             ("val", "restaurant", "inform", "name", "Café Bleu"),
             " for ", ("val", "restaurant", "inform", "people", "6"),
             " people ?"),
        Utterance("system", "Done . Anything else ?"),
        turn("user", "What is the phone number ?",
             ("da", "restaurant", "request", "phone", "?")),
        Utterance("system", "It is 01223 123456 ."),
    ])
    d3 = Dialog("mini-003", "train", [
        turn("user", "Hello , I need some help planning a trip .",
             ("da", "general", "greet", "", "")),
        Utterance("system", "Of course , how can I help ?"),
        turn("user", "Thank you , goodbye .",
             ("da", "general", "thank", "", ""),
             ("da", "general", "bye", "", "")),
        Utterance("system", "Goodbye ."),
    ])
    d4 = Dialog("mini-004", "validation", [
        turn("user", "I need a taxi from ",
             ("val", "taxi", "inform", "depart", "Saint Johns College"),
             " to ", ("val", "taxi", "inform", "dest", "the Golden Palace"),
             " ."),
        Utterance("system", "What time do you want to arrive ?"),
        turn("user", "By ", ("val", "taxi", "inform", "arrive", "13:45"),
             " please ."),
        Utterance("system", "Booked , your taxi is on the way ."),
    ])
    d5 = Dialog("mini-005", "test", [
        turn("user", "I am looking for a ",
             ("val", "hotel", "inform", "stars", "4"),
             " star hotel in the ",
             ("val", "hotel", "inform", "area", "north"),
             " part of town ."),
        Utterance("system", "The Avalon Guest House is available ."),
        turn("user", "Great , book it for ",
             ("val", "hotel", "inform", "stay", "2"), " nights ."),
        Utterance("system", "Done ."),
    ])
    return Corpus(dialogs=[d1, d2, d3, d4, d5])


def word_phrase_in(needle: str, haystack: str) -> bool:
    return re.search(rf"(?<!\w){re.escape(needle)}(?!\w)", haystack,
                     re.IGNORECASE) is not None


def check_hygiene() -> None:
    # 1. values globally unique, and no cross-key word-boundary inclusion
    owner: dict[str, str] = {}
    for key, vals in VALUES.items():
        for v in vals:
            nv = norm_text(v)
            assert nv not in owner, f"value {v!r} in {key} and {owner[nv]}"
            owner[nv] = key
    for k1, vs1 in VALUES.items():
        for v1 in vs1:
            if len(v1) < 4:
                continue
            for k2, vs2 in VALUES.items():
                if k1 == k2:
                    continue
                for v2 in vs2:
                    assert not word_phrase_in(v1, v2), \
                        f"{v1!r} ({k1}) occurs inside {v2!r} ({k2})"

    # 2. no value hides in template or scaffold literals
    scaffolds = [s.replace("{domain}", " ").replace("{phrases}", " ")
                 .replace("{slots}", " ").replace("{v}", " ")
                 for s in (list(aug_tp._STARRED_SCAFFOLDS)
                           + list(aug_tp._PLAIN_SCAFFOLDS)
                           + list(aug_tp._STARRED_REQUEST)
                           + list(aug_tp._PLAIN_REQUEST)
                           + [t for pair in aug_tp._SLOTLESS.values()
                              for t in pair]
                           + list(aug_tp._SLOTLESS_DEFAULT)
                           + list(aug_tp._SLOT_PHRASES.values()))]
    for lit in TEMPLATE_LITERALS + SYS_MID + SYS_END + scaffolds:
        for v in owner:
            if len(v) >= 4:
                assert not word_phrase_in(v, lit), \
                    f"value {v!r} occurs in literal {lit!r}"

    # 3. thesaurus collisions
    thesaurus = load_thesaurus(data_path("thesaurus.txt"))
    for w, syns in thesaurus.items():
        for s in syns:
            assert norm_text(s) not in owner, \
                f"synonym {s!r} of {w!r} is an ontology value"
            assert s not in KEYWORDS, \
                f"synonym {s!r} of {w!r} is an intent keyword"

    # 4. pools unseen for their key AND fully disjoint from all values
    ontology = {k: list(v) for k, v in VALUES.items()}
    pools = load_unseen_values(data_path("unseen_values.txt"), ontology)
    for key, vals in pools.items():
        assert key in VALUES, f"pool {key} has no fixture slot-key"
        for v in vals:
            assert norm_text(v) not in owner, \
                f"pool value {v!r} occurs in the ontology"

    # 5. SVR and repair coverage
    for key, vals in VALUES.items():
        assert key in pools, f"slot-key {key} has no unseen-value pool"
        assert len({norm_text(v) for v in vals}) >= 2, \
            f"slot-key {key} needs two distinct values for repairs"


def main() -> None:
    check_hygiene()

    fixture = build_fixture()
    n_user = {s: sum(1 for d in fixture.split_dialogs(s)
                     for _ in d.user_turns())
              for s in ("train", "validation", "test")}
    assert n_user == {"train": 140, "validation": 20, "test": 40}, n_user

    ingest_ontology(fixture)
    save_corpus(fixture, DATA / "fixture_corpus.json")
    mini = build_mini()
    ingest_ontology(mini)
    save_corpus(mini, DATA / "mini_corpus.json")

    for name in ("fixture_corpus.json", "mini_corpus.json"):
        c = load_corpus(DATA / name, strict=True)
        assert not c.issues
        print(f"{name}: {len(c.dialogs)} dialogs, "
              f"{sum(1 for d in c.dialogs for _ in d.user_turns())} "
              f"user turns, {len(c.ontology)} ontology keys")


if __name__ == "__main__":
    main()
