"""Shared text machinery: tokens, span-safe editing, fuzzy value matching.

Tokenization is deliberately light. A word token is a maximal run of
alphanumeric characters, where apostrophe/colon/period/hyphen/slash also
count as word-internal when flanked by alphanumerics on both sides (so
"i'm", "20:45", "3.5" stay whole). Any other non-space character is a
single-char punct token. Span annotations become atom tokens that the
perturbation ops must treat as indivisible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace as dc_replace
from typing import Iterable, Sequence

from . import kernels
from .corpus import SpanAnnotation, norm_text
from .errors import SpanBoundaryError

WORD = "word"
PUNCT = "punct"
ATOM = "atom"

_CONNECTORS = "':.-/"


@dataclass(frozen=True)
class Token:
    """surface plus its origin: original char range and sequence index.

    index is the token's position in the source token sequence; synthesized
    tokens carry index None and no char range.
    """

    surface: str
    kind: str
    char_start: int | None = None
    char_end: int | None = None
    span_ref: int | None = None
    index: int | None = None

    def with_surface(self, surface: str) -> "Token":
        return dc_replace(self, surface=surface)


def _is_word_char(text: str, i: int) -> bool:
    ch = text[i]
    if ch.isalnum():
        return True
    if ch in _CONNECTORS:
        return (0 < i < len(text) - 1
                and text[i - 1].isalnum() and text[i + 1].isalnum())
    return False


def tokenize(text: str) -> list[Token]:
    """Word and punct tokens with character offsets."""
    out: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        if _is_word_char(text, i):
            j = i + 1
            while j < n and _is_word_char(text, j):
                j += 1
            out.append(Token(text[i:j], WORD, i, j, None, len(out)))
            i = j
        else:
            out.append(Token(text[i], PUNCT, i, i + 1, None, len(out)))
            i += 1
    return out


def trim_span(text: str, sp: SpanAnnotation) -> SpanAnnotation:
    s, e = sp.start, sp.end
    while s < e and text[s].isspace():
        s += 1
    while e > s and text[e - 1].isspace():
        e -= 1
    if (s, e) == (sp.start, sp.end):
        return sp
    return SpanAnnotation(sp.item, s, e)


def tokenize_with_spans(text: str,
                        spans: Sequence[SpanAnnotation]) -> list[Token]:
    """Tokenize text, collapsing each annotated span into one atom token.

    Spans must align with token boundaries (after trimming surrounding
    whitespace) and must not overlap; violations raise SpanBoundaryError.
    """
    base = tokenize(text)
    starts = {t.char_start: k for k, t in enumerate(base)}
    ends = {t.char_end: k for k, t in enumerate(base)}
    for sp in spans:
        if not (0 <= sp.start < sp.end <= len(text)):
            raise SpanBoundaryError(
                f"span [{sp.start},{sp.end}) outside text")
    trimmed = sorted((trim_span(text, sp) for sp in spans),
                     key=lambda s: s.start)
    for a, b in zip(trimmed, trimmed[1:]):
        if b.start < a.end:
            raise SpanBoundaryError(
                f"overlapping spans [{a.start},{a.end}) and "
                f"[{b.start},{b.end})")
    out: list[Token] = []
    k = 0
    for sp in trimmed:
        if not (0 <= sp.start < sp.end <= len(text)):
            raise SpanBoundaryError(
                f"span [{sp.start},{sp.end}) outside text")
        if sp.start not in starts or sp.end not in ends:
            raise SpanBoundaryError(
                f"span [{sp.start},{sp.end}) does not align with token "
                f"boundaries in {text!r}")
        while k < len(base) and base[k].char_end <= sp.start:
            out.append(dc_replace(base[k], index=len(out)))
            k += 1
        out.append(Token(text[sp.start:sp.end], ATOM, sp.start, sp.end,
                         sp.item, len(out)))
        while k < len(base) and base[k].char_start < sp.end:
            k += 1
    while k < len(base):
        out.append(dc_replace(base[k], index=len(out)))
        k += 1
    return out


def assemble(tokens: Sequence[Token],
             original_text: str) -> tuple[str, list[SpanAnnotation]]:
    """Rebuild text (and atom spans) from an edited token sequence.

    Tokens that were adjacent in the source keep their original separator;
    everything else is joined with a single space, except punct tokens that
    originally sat flush against the preceding character.
    """
    parts: list[str] = []
    spans: list[SpanAnnotation] = []
    pos = 0
    prev: Token | None = None
    for t in tokens:
        if prev is None:
            sep = ""
        elif (prev.index is not None and t.index == prev.index + 1
              and prev.char_end is not None and t.char_start is not None):
            sep = original_text[prev.char_end:t.char_start]
        elif (t.kind == PUNCT and t.char_start is not None
              and t.char_start > 0
              and not original_text[t.char_start - 1].isspace()):
            sep = ""
        else:
            sep = " "
        parts.append(sep)
        pos += len(sep)
        parts.append(t.surface)
        if t.kind == ATOM and t.span_ref is not None:
            spans.append(SpanAnnotation(t.span_ref, pos, pos + len(t.surface)))
        pos += len(t.surface)
        prev = t
    return "".join(parts), spans


def insert_text(text: str, spans: Sequence[SpanAnnotation], pos: int,
                insertion: str) -> tuple[str, list[SpanAnnotation]]:
    """Insert a string at pos, shifting spans. Refuses positions strictly
    inside a span (atomicity)."""
    out: list[SpanAnnotation] = []
    for sp in spans:
        if sp.start >= pos:
            out.append(SpanAnnotation(sp.item, sp.start + len(insertion),
                                      sp.end + len(insertion)))
        elif sp.end <= pos:
            out.append(sp)
        else:
            raise ValueError(
                f"insertion at {pos} lands inside span [{sp.start},{sp.end})")
    return text[:pos] + insertion + text[pos:], out


def replace_span_surface(text: str, spans: Sequence[SpanAnnotation],
                         span_index: int, new_surface: str
                         ) -> tuple[str, list[SpanAnnotation]]:
    """Swap the text under spans[span_index] for new_surface, shifting the
    spans to its right."""
    target = spans[span_index]
    delta = len(new_surface) - (target.end - target.start)
    new_text = text[:target.start] + new_surface + text[target.end:]
    out: list[SpanAnnotation] = []
    for j, sp in enumerate(spans):
        if j == span_index:
            out.append(SpanAnnotation(
                sp.item, sp.start, sp.start + len(new_surface)))
        elif sp.start >= target.end:
            out.append(SpanAnnotation(sp.item, sp.start + delta,
                                      sp.end + delta))
        else:
            out.append(sp)
    return new_text, out


def fuzzy_ratio(a: str, b: str) -> float:
    """2*LCS/(len+len) over lowercased characters; 1.0 for two empties."""
    a = a.lower()
    b = b.lower()
    if not a and not b:
        return 1.0
    denom = len(a) + len(b)
    if denom == 0:
        return 1.0
    return 2.0 * kernels.lcs_len(a, b) / denom


@dataclass(frozen=True)
class ValueMatch:
    start: int
    end: int
    score: float


def detect_value(text: str, value: str, threshold: float,
                 exclude: Sequence[tuple[int, int]] = ()) -> ValueMatch | None:
    """Best token-aligned window fuzzily matching value, or None.

    Windows span w consecutive tokens where w is within 2 of the value's
    own token count. Ties break toward higher score, then leftmost, then
    shortest. Windows overlapping an excluded range are skipped.
    """
    tokens = tokenize(text)
    if not tokens:
        return None
    target = norm_text(value)
    vlen = max(1, len(tokenize(value)))
    best: tuple[float, int, int] | None = None
    for width in range(max(1, vlen - 2), vlen + 3):
        if width > len(tokens):
            break
        for i in range(len(tokens) - width + 1):
            start = tokens[i].char_start
            end = tokens[i + width - 1].char_end
            if any(start < xe and xs < end for xs, xe in exclude):
                continue
            score = fuzzy_ratio(norm_text(text[start:end]), target)
            key = (-score, start, end - start)
            if best is None or key < (-best[0], best[1], best[2] - best[1]):
                best = (score, start, end)
    if best is None or best[0] < threshold:
        return None
    return ValueMatch(best[1], best[2], best[0])


_UNITS = ("zero", "one", "two", "three", "four", "five", "six", "seven",
          "eight", "nine", "ten", "eleven", "twelve", "thirteen", "fourteen",
          "fifteen", "sixteen", "seventeen", "eighteen", "nineteen")
_TENS = ("", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy",
         "eighty", "ninety")


def _below_hundred(n: int) -> str:
    if n < 20:
        return _UNITS[n]
    tens, unit = divmod(n, 10)
    return _TENS[tens] + (" " + _UNITS[unit] if unit else "")


def _cardinal(n: int) -> str:
    if n < 100:
        return _below_hundred(n)
    if n < 1000:
        hundreds, rest = divmod(n, 100)
        s = _UNITS[hundreds] + " hundred"
        return s + (" " + _below_hundred(rest) if rest else "")
    if n < 10000:
        thousands, rest = divmod(n, 1000)
        s = _UNITS[thousands] + " thousand"
        return s + (" " + _cardinal(rest) if rest else "")
    return " ".join(_UNITS[int(d)] for d in str(n))


def _spoken_time(hh: int, mm: int) -> str:
    hour = _below_hundred(hh)
    if mm == 0:
        return hour + " o'clock"
    if mm < 10:
        return hour + " oh " + _UNITS[mm]
    return hour + " " + _below_hundred(mm)


_NUMBER_RE = re.compile(
    r"(?<![\w:.])(\d{1,2}:\d{2}|\d+\.\d+|\d+)(?!\w|[:.]\d)")


def spoken_number(tok: str) -> str:
    """Spoken form of one numeric token (time, decimal, or integer)."""
    if ":" in tok:
        hh, mm = tok.split(":")
        return _spoken_time(int(hh), int(mm))
    if "." in tok:
        whole, frac = tok.split(".")
        return (_cardinal(int(whole)) + " point "
                + " ".join(_UNITS[int(d)] for d in frac))
    return _cardinal(int(tok))


def number_to_spoken_edits(text: str) -> tuple[str, list[tuple[str, str]]]:
    """Expand numeric tokens to words; also return (original, spoken) pairs."""
    edits: list[tuple[str, str]] = []

    def sub(m: re.Match) -> str:
        spoken = spoken_number(m.group(1))
        edits.append((m.group(1), spoken))
        return spoken

    return _NUMBER_RE.sub(sub, text), edits


def number_to_spoken(text: str) -> str:
    """Expand every numeric token in text to its spoken form."""
    return number_to_spoken_edits(text)[0]


def letter_bigrams(word: str) -> tuple[str, ...]:
    """Letter-bigram sequence used as a crude stand-in for phonemes."""
    w = word.lower()
    if len(w) < 2:
        return (w,) if w else ()
    return tuple(w[i:i + 2] for i in range(len(w) - 1))


def strip_case_punct(text: str) -> str:
    """Lowercase, drop punctuation except word-internal apostrophes, and
    collapse whitespace."""
    out: list[str] = []
    n = len(text)
    for i, ch in enumerate(text):
        if ch.isalnum() or ch.isspace():
            out.append(ch)
        elif ch == "'" and 0 < i < n - 1 and text[i - 1].isalnum() \
                and text[i + 1].isalnum():
            out.append(ch)
        else:
            out.append(" ")
    return " ".join("".join(out).split()).lower()
