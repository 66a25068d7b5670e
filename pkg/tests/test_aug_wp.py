"""Word perturbation: forced-choice goldens for all five operations, edit
budget math, span protection, and fallback order."""

from __future__ import annotations

import math
import random

import pytest
from conftest import ForcedRandom

from laug.aug_wp import (EDA_OPS, WpConfig, edit_budget, eda_perturb,
                         slot_value_replace, wp_augment)
from laug.corpus import DialogActItem, SpanAnnotation, Utterance
from laug.errors import NoCandidateError, NoSlotError

THESAURUS = {
    "want": ("wishing", "need", "hope"),
    "go": ("travel", "head"),
}
STOPWORDS = frozenset({"i", "to", "a", "the"})
CFG = WpConfig(alpha=0.1, p_svr=0.2, stopwords=STOPWORDS,
               thesaurus=THESAURUS)


def cambridge_turn() -> Utterance:
    return Utterance(
        "user", "I want to go to Cambridge .",
        da=(DialogActItem("attraction", "inform", "dest", "Cambridge"),),
        spans=(SpanAnnotation(0, 16, 25),))


# token sequence: [I][want][to][go][to][Cambridge:atom][.] -> five word
# tokens, so the edit budget is max(1, round(0.5)) = 1 and each golden
# forces exactly one operation's choices.


def test_golden_synonym():
    rng = ForcedRandom(choice=[1, "wishing"])
    rec = eda_perturb(cambridge_turn(), "synonym", rng, CFG)
    assert rec.text == "I wishing to go to Cambridge ."
    assert rec.da == cambridge_turn().da
    rng.assert_exhausted()


def test_golden_insert():
    rng = ForcedRandom(choice=[1, "need"], randrange=[1])
    rec = eda_perturb(cambridge_turn(), "insert", rng, CFG)
    assert rec.text == "I need want to go to Cambridge ."
    assert rec.da == cambridge_turn().da
    rng.assert_exhausted()


def test_golden_swap():
    rng = ForcedRandom(sample=[(1, 2)])
    rec = eda_perturb(cambridge_turn(), "swap", rng, CFG)
    assert rec.text == "I to want go to Cambridge ."
    assert rec.da == cambridge_turn().da
    rng.assert_exhausted()


def test_golden_delete():
    rng = ForcedRandom(choice=[2])
    rec = eda_perturb(cambridge_turn(), "delete", rng, CFG)
    assert rec.text == "I want go to Cambridge ."
    assert rec.da == cambridge_turn().da
    rng.assert_exhausted()


def test_golden_slot_value_replacement():
    pool = {"attraction-dest": ("Liverpool",)}
    rng = ForcedRandom(randrange=[0], choice=["Liverpool"])
    rec = slot_value_replace(cambridge_turn(), pool, rng)
    assert rec.text == "I want to go to Liverpool ."
    assert rec.da == (DialogActItem("attraction", "inform", "dest",
                                    "Liverpool"),)
    sp = rec.spans[0]
    assert rec.text[sp.start:sp.end] == "Liverpool"
    assert rec.notes == ("svr:attraction-dest:Cambridge->Liverpool",)
    rng.assert_exhausted()


@pytest.mark.parametrize("words,want", [
    (1, 1), (4, 1), (5, 1), (9, 1), (10, 1), (14, 1), (15, 2), (24, 2),
    (25, 3), (30, 3),
])
def test_edit_budget(words, want):
    assert edit_budget(0.1, words) == want
    assert edit_budget(0.1, words) == max(
        1, math.floor(0.1 * words + 0.5))


def test_budget_spent_on_longer_sentences():
    text = " ".join(["walk"] * 14 + ["want"])  # 15 words -> budget 2
    u = Utterance("user", text)
    rng = random.Random(5)
    rec = eda_perturb(u, "delete", rng, CFG)
    assert len(rec.text.split()) == 13


def test_synonym_skips_stopwords_and_atoms():
    u = Utterance(
        "user", "I want to go to Cambridge .",
        da=(DialogActItem("attraction", "inform", "dest", "Cambridge"),),
        spans=(SpanAnnotation(0, 16, 25),))
    # "go" (index 3) and "want" (index 1) are the only eligible sites; force
    # each in turn and confirm nothing else ever gets replaced
    for site, syn in [(1, "hope"), (3, "travel")]:
        rec = eda_perturb(u, "synonym", ForcedRandom(choice=[site, syn]),
                          CFG)
        assert "Cambridge" in rec.text
        assert syn in rec.text.split()


def test_ops_never_touch_span_values():
    u = cambridge_turn()
    for op in EDA_OPS:
        for seed in range(40):
            try:
                rec = eda_perturb(u, op, random.Random(seed), CFG)
            except NoCandidateError:
                continue
            assert rec.da == u.da
            sp = rec.spans[0]
            assert rec.text[sp.start:sp.end] == "Cambridge"


def test_delete_never_removes_last_word():
    u = Utterance("user", "want")
    with pytest.raises(NoCandidateError):
        eda_perturb(u, "delete", random.Random(0), CFG)


def test_swap_needs_two_words():
    u = Utterance("user", "want Cambridge",
                  da=(DialogActItem("t", "inform", "dest", "Cambridge"),),
                  spans=(SpanAnnotation(0, 5, 14),))
    with pytest.raises(NoCandidateError):
        eda_perturb(u, "swap", random.Random(0), CFG)


def test_synonym_without_thesaurus_word():
    u = Utterance("user", "zebra xylophone")
    with pytest.raises(NoCandidateError):
        eda_perturb(u, "synonym", random.Random(0), CFG)


def test_no_word_tokens():
    with pytest.raises(NoCandidateError):
        eda_perturb(Utterance("user", "???"), "delete",
                    random.Random(0), CFG)


def test_svr_requires_unseen_pool():
    u = cambridge_turn()
    with pytest.raises(NoSlotError):
        slot_value_replace(u, {}, random.Random(0))
    # a pool holding only the current value (any casing) is not unseen
    with pytest.raises(NoSlotError):
        slot_value_replace(u, {"attraction-dest": ("  CAMBRIDGE ",)},
                           random.Random(0))


def test_svr_ignores_requests():
    u = Utterance("user", "what is the phone number ?",
                  da=(DialogActItem("hotel", "request", "phone", "?"),))
    with pytest.raises(NoSlotError):
        slot_value_replace(u, {"hotel-phone": ("12345",)}, random.Random(0))


def test_wp_augment_gate_routes_to_svr():
    pool = {"attraction-dest": ("Liverpool",)}
    rng = ForcedRandom(random_vals=[0.1], randrange=[0],
                       choice=["Liverpool"])
    rec = wp_augment(cambridge_turn(), CFG, pool, rng)
    assert rec.text == "I want to go to Liverpool ."
    rng.assert_exhausted()


def test_wp_augment_gate_routes_to_eda():
    rng = ForcedRandom(random_vals=[0.9], choice=["synonym", 1, "wishing"])
    rec = wp_augment(cambridge_turn(), CFG, {}, rng)
    assert rec.text == "I wishing to go to Cambridge ."
    rng.assert_exhausted()


def test_wp_augment_svr_falls_back_to_eda():
    # gate picks SVR but there is no pool; the forced op chain then applies
    rng = ForcedRandom(random_vals=[0.0], choice=["delete", 2])
    rec = wp_augment(cambridge_turn(), CFG, {}, rng)
    assert rec.text == "I want go to Cambridge ."
    rng.assert_exhausted()


def test_wp_augment_eda_falls_back_to_svr():
    # no thesaurus word and one word token: all four EDA ops fail, SVR is
    # the last resort (p_svr > 0)
    u = Utterance("user", "Cambridge",
                  da=(DialogActItem("t", "inform", "dest", "Cambridge"),),
                  spans=(SpanAnnotation(0, 0, 9),))
    pool = {"t-dest": ("Liverpool",)}
    rec = wp_augment(u, CFG, pool, random.Random(1))
    assert rec.text == "Liverpool"
    assert rec.da[0].value == "Liverpool"


def test_wp_augment_p_svr_zero_never_replaces_values():
    u = Utterance("user", "Cambridge",
                  da=(DialogActItem("t", "inform", "dest", "Cambridge"),),
                  spans=(SpanAnnotation(0, 0, 9),))
    cfg = WpConfig(alpha=0.1, p_svr=0.0, stopwords=STOPWORDS,
                   thesaurus=THESAURUS)
    with pytest.raises(NoCandidateError):
        wp_augment(u, cfg, {"t-dest": ("Liverpool",)}, random.Random(1))


def test_wp_config_validation():
    with pytest.raises(ValueError):
        WpConfig(alpha=0.0)
    with pytest.raises(ValueError):
        WpConfig(alpha=1.5)
    with pytest.raises(ValueError):
        WpConfig(p_svr=-0.1)


def test_match_case_carries_capitalization():
    u = Utterance("user", "Want to go now")
    rec = eda_perturb(u, "synonym", ForcedRandom(choice=[0, "need"]), CFG)
    assert rec.text.startswith("Need ")
