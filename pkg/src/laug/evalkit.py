"""Evaluation: overall F1, change-rate statistics, and a lexicon LU
baseline.

The baseline memorizes training-split value strings and slot-less intent
keywords; it exists to demonstrate directional robustness drops, not to
compete with neural LU models.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from . import kernels
from .corpus import Corpus, DialogActItem, LuExample, norm_text, slot_key
from .errors import CorpusValidationError
from .records import AugmentationRecord
from .textkit import WORD, strip_case_punct, tokenize


@dataclass(frozen=True)
class F1Report:
    true_positives: int
    false_positives: int
    false_negatives: int
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict:
        return {"true_positives": self.true_positives,
                "false_positives": self.false_positives,
                "false_negatives": self.false_negatives,
                "precision": self.precision, "recall": self.recall,
                "f1": self.f1}


def f1_from_counts(tp: int, fp: int, fn: int) -> F1Report:
    """Precision/recall with 0/0 defined as 1.0; F1 0 when P+R is 0."""
    precision = 1.0 if tp + fp == 0 else tp / (tp + fp)
    recall = 1.0 if tp + fn == 0 else tp / (tp + fn)
    f1 = 0.0 if precision + recall == 0 else \
        2 * precision * recall / (precision + recall)
    return F1Report(tp, fp, fn, precision, recall, f1)


def overall_f1(pairs) -> F1Report:
    """Micro-averaged F1 over (predicted DA set, gold DA set) pairs."""
    tp = fp = fn = 0
    for pred, gold in pairs:
        pred_set = {it.key() for it in pred}
        gold_set = {it.key() for it in gold}
        tp += len(pred_set & gold_set)
        fp += len(pred_set - gold_set)
        fn += len(gold_set - pred_set)
    return f1_from_counts(tp, fp, fn)


@dataclass(frozen=True)
class ChangeRateReport:
    char_rate: float
    word_rate: float
    slot_rate: float

    def as_dict(self) -> dict:
        return {"char_rate": self.char_rate, "word_rate": self.word_rate,
                "slot_rate": self.slot_rate}


def _word_tokens(text: str) -> list[str]:
    return strip_case_punct(text).split()


def change_rates(orig: Corpus, aug: list[AugmentationRecord]
                 ) -> ChangeRateReport:
    """How far the records drifted from their source turns.

    char/word rates are means over records of normalized edit distance;
    slot_rate is the pooled fraction of original concrete value fields
    that changed or were dropped.
    """
    by_id = {d.id: d for d in orig.dialogs}
    char_sum = 0.0
    word_sum = 0.0
    values_total = 0
    values_changed = 0
    for rec in aug:
        did, idx = rec.source
        d = by_id.get(did)
        if d is None or not (0 <= idx < len(d.turns)):
            raise CorpusValidationError(
                f"record source ({did}, {idx}) not found in corpus",
                dialog_id=did)
        src = d.turns[idx]

        a, b = src.text.casefold(), rec.text.casefold()
        denom = max(len(a), len(b))
        char_sum += kernels.edit_distance(a, b) / denom if denom else 0.0

        wa, wb = _word_tokens(src.text), _word_tokens(rec.text)
        denom = max(len(wa), len(wb))
        word_sum += kernels.edit_distance_seq(wa, wb) / denom if denom \
            else 0.0

        rec_values: dict[tuple, list[str]] = {}
        for it in rec.da:
            if it.slot and it.value != "?":
                rec_values.setdefault((it.domain, it.intent, it.slot),
                                      []).append(norm_text(it.value))
        for it in src.da:
            if not it.slot or it.value == "?":
                continue
            values_total += 1
            pool = rec_values.get((it.domain, it.intent, it.slot))
            if pool and norm_text(it.value) in pool:
                pool.remove(norm_text(it.value))
            else:
                values_changed += 1
                if pool:
                    pool.pop(0)
    n = len(aug)
    return ChangeRateReport(
        char_rate=char_sum / n if n else 0.0,
        word_rate=word_sum / n if n else 0.0,
        slot_rate=values_changed / values_total if values_total else 0.0)


def format_change_table(reports: dict[str, ChangeRateReport]) -> str:
    """Plain-text table of change rates per method (percentages)."""
    lines = [f"{'method':<8}{'char%':>8}{'word%':>8}{'slot%':>8}"]
    for name, rep in reports.items():
        lines.append(f"{name:<8}{100 * rep.char_rate:>8.1f}"
                     f"{100 * rep.word_rate:>8.1f}"
                     f"{100 * rep.slot_rate:>8.1f}")
    return "\n".join(lines)


@dataclass
class LexiconLu:
    """Memorized value strings and slot-less intent keywords."""

    value_map: dict[str, tuple[str, str, str]]
    keyword_map: dict[str, tuple[str, str]]


def train_lexicon_lu(c: Corpus,
                     stopwords: frozenset[str] | None = None) -> LexiconLu:
    """Build the lexicon baseline from the training split only."""
    if stopwords is None:
        from .resources import data_path, load_stopwords
        stopwords = load_stopwords(data_path("stopwords.txt"))

    value_counts: dict[str, Counter] = {}
    token_turns: Counter = Counter()
    token_intents: dict[str, Counter] = {}
    n_train_turns = 0
    for d in c.split_dialogs("train"):
        for _, t in d.user_turns():
            n_train_turns += 1
            for it in t.da:
                if it.slot and it.value != "?":
                    value_counts.setdefault(norm_text(it.value), Counter())[
                        (it.domain, it.intent, it.slot)] += 1
            tokens = {tok.surface.lower() for tok in tokenize(t.text)
                      if tok.kind == WORD}
            slotless = {(it.domain, it.intent) for it in t.da if not it.slot}
            for tok in sorted(tokens):
                token_turns[tok] += 1
                if slotless:
                    counter = token_intents.setdefault(tok, Counter())
                    for di in sorted(slotless):
                        counter[di] += 1
    if n_train_turns == 0:
        raise ValueError("training split is empty")

    value_map: dict[str, tuple[str, str, str]] = {}
    for value, counter in value_counts.items():
        best = min(counter.items(), key=lambda kv: (-kv[1], kv[0]))
        value_map[value] = best[0]

    keyword_map: dict[str, tuple[str, str]] = {}
    for tok, counter in token_intents.items():
        if len(tok) < 2 or tok in stopwords:
            continue
        best_di, best_n = min(counter.items(), key=lambda kv: (-kv[1], kv[0]))
        if best_n >= 2 and best_n / token_turns[tok] >= 0.5:
            keyword_map[tok] = best_di
    return LexiconLu(value_map=value_map, keyword_map=keyword_map)


def predict(lu: LexiconLu, ex: LuExample) -> tuple[DialogActItem, ...]:
    """Longest non-overlapping value matches plus keyword intents."""
    text = ex.text
    words = [t for t in tokenize(text) if t.kind == WORD]

    candidates: list[tuple[int, int, int]] = []  # (length, start_w, end_w)
    max_key_len = max((len(k.split()) for k in lu.value_map), default=0)
    for i in range(len(words)):
        for width in range(1, max_key_len + 1):
            j = i + width
            if j > len(words):
                break
            if width > 1:
                gap = text[words[j - 2].char_end:words[j - 1].char_start]
                if gap.strip():
                    break  # punctuation interrupts a value phrase
            phrase = norm_text(
                text[words[i].char_start:words[j - 1].char_end])
            if phrase in lu.value_map:
                candidates.append((width, i, j))
    chosen: list[tuple[int, int]] = []
    for width, i, j in sorted(candidates, key=lambda c: (-c[0], c[1])):
        if all(j <= ci or i >= cj for ci, cj in chosen):
            chosen.append((i, j))
    chosen.sort()

    out: list[DialogActItem] = []
    seen = set()
    for i, j in chosen:
        surface = text[words[i].char_start:words[j - 1].char_end]
        domain, intent, slot = lu.value_map[norm_text(surface)]
        item = DialogActItem(domain, intent, slot, surface)
        if item.key() not in seen:
            seen.add(item.key())
            out.append(item)
    for t in words:
        di = lu.keyword_map.get(t.surface.lower())
        if di is not None:
            item = DialogActItem(di[0], di[1])
            if item.key() not in seen:
                seen.add(item.key())
                out.append(item)
    return tuple(out)
