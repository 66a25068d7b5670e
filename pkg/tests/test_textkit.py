"""Tokenizer, span-safe editing, fuzzy matching, and number expansion."""

from __future__ import annotations

import pytest

from laug.corpus import SpanAnnotation
from laug.errors import SpanBoundaryError
from laug.textkit import (ATOM, PUNCT, WORD, Token, assemble, detect_value,
                          fuzzy_ratio, insert_text, letter_bigrams,
                          number_to_spoken, number_to_spoken_edits,
                          replace_span_surface, spoken_number,
                          strip_case_punct, tokenize, tokenize_with_spans)


def surfaces(tokens):
    return [(t.surface, t.kind) for t in tokens]


def test_tokenize_words_and_punct():
    toks = tokenize("I want to go, now!")
    assert surfaces(toks) == [
        ("I", WORD), ("want", WORD), ("to", WORD), ("go", WORD),
        (",", PUNCT), ("now", WORD), ("!", PUNCT)]
    assert (toks[0].char_start, toks[0].char_end) == (0, 1)
    assert (toks[4].char_start, toks[4].char_end) == (12, 13)


@pytest.mark.parametrize("text,whole", [
    ("i'm here", "i'm"),
    ("at 20:45 sharp", "20:45"),
    ("rated 3.5 stars", "3.5"),
    ("fen-ditton area", "fen-ditton"),
    ("either/or question", "either/or"),
])
def test_tokenize_keeps_connected_words_whole(text, whole):
    assert whole in [t.surface for t in tokenize(text) if t.kind == WORD]


def test_tokenize_connector_needs_flanking_alnum():
    assert [t.surface for t in tokenize("end. next")] == ["end", ".", "next"]
    assert [t.surface for t in tokenize("'quoted'")] == ["'", "quoted", "'"]


def test_tokenize_with_spans_atoms():
    text = "go to Pizza Hut Fen Ditton now"
    spans = [SpanAnnotation(0, 6, 26)]
    toks = tokenize_with_spans(text, spans)
    assert surfaces(toks) == [("go", WORD), ("to", WORD),
                              ("Pizza Hut Fen Ditton", ATOM), ("now", WORD)]
    atom = toks[2]
    assert (atom.char_start, atom.char_end, atom.span_ref) == (6, 26, 0)


def test_tokenize_with_spans_trims_whitespace():
    text = "go to Cambridge now"
    toks = tokenize_with_spans(text, [SpanAnnotation(0, 5, 16)])
    assert ("Cambridge", ATOM) in surfaces(toks)


def test_tokenize_with_spans_rejects_misaligned():
    text = "go to Cambridge now"
    with pytest.raises(SpanBoundaryError):
        tokenize_with_spans(text, [SpanAnnotation(0, 7, 15)])
    with pytest.raises(SpanBoundaryError):
        tokenize_with_spans(text, [SpanAnnotation(0, 6, 40)])


def test_tokenize_with_spans_rejects_overlap():
    text = "from A to B"
    with pytest.raises(SpanBoundaryError):
        tokenize_with_spans(text, [SpanAnnotation(0, 5, 11),
                                   SpanAnnotation(1, 10, 11)])


def test_assemble_round_trip_without_edits():
    text = "I need a taxi from the gandhi to la margherita by 11:15."
    spans = [SpanAnnotation(0, 19, 29), SpanAnnotation(1, 33, 46),
             SpanAnnotation(2, 50, 55)]
    toks = tokenize_with_spans(text, spans)
    rebuilt, new_spans = assemble(toks, text)
    assert rebuilt == text
    assert [(s.start, s.end) for s in new_spans] == \
        [(s.start, s.end) for s in spans]


def test_assemble_after_deletion_and_insertion():
    text = "I want to go to Cambridge ."
    toks = tokenize_with_spans(text, [SpanAnnotation(0, 16, 25)])
    del toks[2]  # first "to"
    rebuilt, spans = assemble(toks, text)
    assert rebuilt == "I want go to Cambridge ."
    assert rebuilt[spans[0].start:spans[0].end] == "Cambridge"

    toks = tokenize_with_spans(text, [SpanAnnotation(0, 16, 25)])
    toks.insert(1, Token("really", WORD))
    rebuilt, spans = assemble(toks, text)
    assert rebuilt == "I really want to go to Cambridge ."
    assert rebuilt[spans[0].start:spans[0].end] == "Cambridge"


def test_assemble_keeps_flush_punctuation():
    text = "Yes, book it."
    toks = tokenize(text)
    rebuilt, _ = assemble(toks, text)
    assert rebuilt == text
    # after deleting "Yes" the comma still hugs the previous word
    del toks[0]
    rebuilt, _ = assemble(toks, text)
    assert rebuilt == ", book it."


def test_insert_text_shifts_spans():
    text = "go to Cambridge now"
    spans = [SpanAnnotation(0, 6, 15)]
    out, shifted = insert_text(text, spans, 3, "um ")
    assert out == "go um to Cambridge now"
    assert (shifted[0].start, shifted[0].end) == (9, 18)
    assert out[9:18] == "Cambridge"


def test_insert_text_refuses_inside_span():
    with pytest.raises(ValueError):
        insert_text("go to Cambridge", [SpanAnnotation(0, 6, 15)], 8, "x")


def test_replace_span_surface():
    text = "from A-место to Cambridge by 11:15"
    spans = [SpanAnnotation(0, 5, 12), SpanAnnotation(1, 16, 25),
             SpanAnnotation(2, 29, 34)]
    out, shifted = replace_span_surface(text, spans, 1, "Liverpool City")
    assert out == "from A-место to Liverpool City by 11:15"
    assert out[shifted[1].start:shifted[1].end] == "Liverpool City"
    assert out[shifted[2].start:shifted[2].end] == "11:15"
    assert (shifted[0].start, shifted[0].end) == (5, 12)


def test_fuzzy_ratio_values():
    assert fuzzy_ratio("leicester", "lester") == pytest.approx(0.8)
    assert fuzzy_ratio("Cambridge", "cambridge") == 1.0
    assert fuzzy_ratio("", "") == 1.0
    assert fuzzy_ratio("abc", "") == 0.0
    assert fuzzy_ratio("abc", "abc") == 1.0


def test_detect_value_accepts_at_point_seven():
    text = "i'm leaving from lester tomorrow"
    m = detect_value(text, "Leicester", 0.7)
    assert m is not None
    assert text[m.start:m.end] == "lester"
    assert m.score == pytest.approx(0.8)
    assert detect_value(text, "Leicester", 0.9) is None


def test_detect_value_prefers_exact_and_leftmost():
    text = "to cambridge via cambridge north"
    m = detect_value(text, "cambridge", 1.0)
    assert (m.start, m.end) == (3, 12)


def test_detect_value_honors_exclusions():
    text = "to cambridge via cambridge north"
    m = detect_value(text, "cambridge", 1.0, exclude=[(3, 12)])
    assert (m.start, m.end) == (17, 26)
    assert detect_value(text, "cambridge", 1.0,
                        exclude=[(0, len(text))]) is None


def test_detect_value_multiword_window():
    text = "a table at pizza hut fen ditton please"
    m = detect_value(text, "Pizza Hut Fen Ditton", 1.0)
    assert text[m.start:m.end] == "pizza hut fen ditton"


@pytest.mark.parametrize("tok,want", [
    ("13:45", "thirteen forty five"),
    ("20:45", "twenty forty five"),
    ("8:00", "eight o'clock"),
    ("09:05", "nine oh five"),
    ("17:15", "seventeen fifteen"),
    ("6", "six"),
    ("0", "zero"),
    ("42", "forty two"),
    ("600", "six hundred"),
    ("2024", "two thousand twenty four"),
    ("90210", "nine zero two one zero"),
    ("3.5", "three point five"),
])
def test_spoken_number(tok, want):
    assert spoken_number(tok) == want


def test_number_expansion_in_context():
    assert number_to_spoken("arrive by 13:45.") == \
        "arrive by thirteen forty five."
    assert number_to_spoken("for 3 people") == "for three people"
    text, edits = number_to_spoken_edits("at 8:00 or 9:05")
    assert text == "at eight o'clock or nine oh five"
    assert edits == [("8:00", "eight o'clock"), ("9:05", "nine oh five")]


def test_number_expansion_skips_codes():
    for untouched in ("version 1.2.3", "id 12:34:56", "room 4u", "a1 pass"):
        assert number_to_spoken(untouched) == untouched


def test_strip_case_punct():
    assert strip_case_punct("I'm Here, NOW!") == "i'm here now"
    assert strip_case_punct("at 20:45.") == "at 20 45"
    assert strip_case_punct("  spaced   out  ") == "spaced out"
    assert strip_case_punct("'quoted'") == "quoted"


def test_letter_bigrams():
    assert letter_bigrams("no") == ("no",)
    assert letter_bigrams("a") == ("a",)
    assert letter_bigrams("") == ()
    assert letter_bigrams("Know") == ("kn", "no", "ow")
