"""Word perturbation: four label-preserving EDA ops plus slot value
replacement.

The four EDA ops (synonym, insert, swap, delete) edit word tokens only;
annotated spans ride along as atoms and are never touched, so the dialog
act is preserved byte-for-byte. Slot value replacement swaps one annotated
value for an unseen one and rewrites the label to match.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .corpus import Utterance, slot_key
from .errors import NoCandidateError, NoSlotError
from .records import AugmentationRecord, make_record
from .resources import ResourceBundle
from .textkit import WORD, Token, assemble, replace_span_surface, \
    tokenize_with_spans

EDA_OPS = ("synonym", "insert", "swap", "delete")

# UnseenValuePool: map slot-key -> tuple of replacement values
UnseenValuePool = dict


@dataclass(frozen=True)
class WpConfig:
    alpha: float = 0.1
    p_svr: float = 0.2
    stopwords: frozenset[str] = frozenset()
    thesaurus: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if not (0 < self.alpha <= 1):
            raise ValueError(f"alpha must be in (0,1], got {self.alpha}")
        if not (0 <= self.p_svr <= 1):
            raise ValueError(f"p_svr must be in [0,1], got {self.p_svr}")

    @classmethod
    def from_bundle(cls, bundle: ResourceBundle, alpha: float = 0.1,
                    p_svr: float = 0.2) -> "WpConfig":
        return cls(alpha=alpha, p_svr=p_svr, stopwords=bundle.stopwords,
                   thesaurus=bundle.thesaurus)


def edit_budget(alpha: float, word_count: int) -> int:
    """n = max(1, round(alpha*l)), rounding halves up."""
    return max(1, math.floor(alpha * word_count + 0.5))


def _match_case(template: str, word: str) -> str:
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


def _synonym_sites(tokens: list[Token], cfg: WpConfig) -> list[int]:
    sites = []
    for i, t in enumerate(tokens):
        if t.kind != WORD:
            continue
        w = t.surface.lower()
        if w in cfg.stopwords:
            continue
        syns = [s for s in cfg.thesaurus.get(w, ()) if s != w]
        if syns:
            sites.append(i)
    return sites


def eda_perturb(u: Utterance, op: str, rng: random.Random, cfg: WpConfig,
                source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """Apply one EDA op n = max(1, round(alpha*l)) times.

    l counts word tokens (atoms and punctuation excluded). Atom tokens are
    never selected, moved into, split, or deleted. Raises NoCandidateError
    when the op has no legal move (or cannot spend its whole budget, e.g.
    delete may never remove the last word token).
    """
    if op not in EDA_OPS:
        raise ValueError(f"unknown EDA op {op!r}")
    tokens = list(tokenize_with_spans(u.text, u.spans))
    word_count = sum(1 for t in tokens if t.kind == WORD)
    if word_count == 0:
        raise NoCandidateError("no word tokens to perturb")
    n = edit_budget(cfg.alpha, word_count)
    notes: list[str] = []

    for _ in range(n):
        if op == "synonym":
            sites = _synonym_sites(tokens, cfg)
            if not sites:
                raise NoCandidateError("no thesaurus-eligible word")
            i = rng.choice(sites)
            w = tokens[i].surface.lower()
            syn = rng.choice([s for s in cfg.thesaurus[w] if s != w])
            new = _match_case(tokens[i].surface, syn)
            notes.append(f"eda:synonym:{i}:{tokens[i].surface}->{new}")
            tokens[i] = tokens[i].with_surface(new)
        elif op == "insert":
            sites = _synonym_sites(tokens, cfg)
            if not sites:
                raise NoCandidateError("no thesaurus-eligible word")
            i = rng.choice(sites)
            w = tokens[i].surface.lower()
            syn = rng.choice([s for s in cfg.thesaurus[w] if s != w])
            gap = rng.randrange(len(tokens) + 1)
            notes.append(f"eda:insert:{gap}:{syn}")
            tokens.insert(gap, Token(syn, WORD))
        elif op == "swap":
            word_pos = [i for i, t in enumerate(tokens) if t.kind == WORD]
            if len(word_pos) < 2:
                raise NoCandidateError("need two word tokens to swap")
            i, j = rng.sample(word_pos, 2)
            notes.append(f"eda:swap:{i}<->{j}")
            tokens[i], tokens[j] = tokens[j], tokens[i]
        else:  # delete
            word_pos = [i for i, t in enumerate(tokens) if t.kind == WORD]
            if len(word_pos) < 2:
                raise NoCandidateError("refusing to delete the last word")
            i = rng.choice(word_pos)
            notes.append(f"eda:delete:{i}:{tokens[i].surface}")
            del tokens[i]

    text, spans = assemble(tokens, u.text)
    return make_record("wp", source, text, u.da, spans, notes)


def slot_value_replace(u: Utterance, pool: UnseenValuePool,
                       rng: random.Random,
                       source: tuple[str, int] = ("", 0)
                       ) -> AugmentationRecord:
    """Replace one annotated value (text and label) with an unseen one."""
    eligible: list[tuple[int, list[str]]] = []
    for pos, sp in enumerate(u.spans):
        item = u.da[sp.item]
        if not item.slot or item.value == "?":
            continue
        cands = [v for v in pool.get(slot_key(item.domain, item.slot), ())
                 if " ".join(v.lower().split())
                 != " ".join(item.value.lower().split())]
        if cands:
            eligible.append((pos, cands))
    if not eligible:
        raise NoSlotError("no span has an unseen-value pool entry")
    pos, cands = eligible[rng.randrange(len(eligible))]
    new_value = rng.choice(cands)
    old_item = u.da[u.spans[pos].item]
    text, spans = replace_span_surface(u.text, u.spans, pos, new_value)
    da = list(u.da)
    da[u.spans[pos].item] = old_item.replace_value(new_value)
    key = slot_key(old_item.domain, old_item.slot)
    notes = [f"svr:{key}:{old_item.value}->{new_value}"]
    return make_record("wp", source, text, da, spans, notes)


def wp_augment(u: Utterance, cfg: WpConfig, pool: UnseenValuePool,
               rng: random.Random,
               source: tuple[str, int] = ("", 0)) -> AugmentationRecord:
    """One word-perturbation record: SVR with probability p_svr, else a
    uniformly chosen EDA op.

    Fallbacks: SVR with no eligible slot falls back to an EDA op; a failed
    EDA op falls back to the remaining ops (then SVR, when p_svr > 0).
    Raises NoCandidateError when every sub-operation fails.
    """

    def eda_chain(first: str) -> AugmentationRecord | None:
        for op in [first] + [o for o in EDA_OPS if o != first]:
            try:
                return eda_perturb(u, op, rng, cfg, source=source)
            except NoCandidateError:
                continue
        return None

    if rng.random() < cfg.p_svr:
        try:
            return slot_value_replace(u, pool, rng, source=source)
        except NoSlotError:
            rec = eda_chain(rng.choice(EDA_OPS))
            if rec is not None:
                return rec
            raise NoCandidateError("no wp sub-operation applicable") from None

    rec = eda_chain(rng.choice(EDA_OPS))
    if rec is not None:
        return rec
    if cfg.p_svr > 0:
        try:
            return slot_value_replace(u, pool, rng, source=source)
        except NoSlotError:
            pass
    raise NoCandidateError("no wp sub-operation applicable")
