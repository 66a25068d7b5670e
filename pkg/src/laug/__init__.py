"""laug: perturbation toolkit for annotated task-oriented dialog corpora.

Four perturbation families over user turns (word perturbation,
paraphrasing, simulated ASR noise, speech disfluencies), plus change-rate
statistics, overall-F1 scoring, and a lexicon LU baseline.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .aug_sd import sd_augment
from .aug_sr import SrConfig, sr_augment
from .aug_tp import (HttpParaphraser, TemplateParaphraser,
                     parse_serialized_da, serialize_da, tp_augment)
from .aug_wp import WpConfig, eda_perturb, slot_value_replace, wp_augment
from .corpus import (Corpus, Dialog, DialogActItem, LuExample,
                     SpanAnnotation, Utterance, extract_lu_examples,
                     load_corpus, load_multiwoz, save_corpus)
from .errors import (ConfigError, CorpusFormatError, CorpusValidationError,
                     GeneratorUnavailableError, LaugError, NoCandidateError,
                     NoRepairableSlotError, NoSlotError, ResourceError,
                     SpanBoundaryError)
from .evalkit import (ChangeRateReport, F1Report, LexiconLu, change_rates,
                      overall_f1, predict, train_lexicon_lu)
from .records import AugmentationRecord, make_record, records_from_corpus
from .resources import ResourceBundle, default_bundle
from .textkit import (detect_value, fuzzy_ratio, number_to_spoken,
                      spoken_number, strip_case_punct, tokenize,
                      tokenize_with_spans)

__all__ = [
    "__version__",
    "AugmentationRecord", "ChangeRateReport", "ConfigError", "Corpus",
    "CorpusFormatError", "CorpusValidationError", "Dialog",
    "DialogActItem", "F1Report", "GeneratorUnavailableError",
    "HttpParaphraser", "LaugError", "LexiconLu", "LuExample",
    "NoCandidateError", "NoRepairableSlotError", "NoSlotError",
    "ResourceBundle", "ResourceError", "SpanAnnotation",
    "SpanBoundaryError", "SrConfig", "TemplateParaphraser", "Utterance",
    "WpConfig", "change_rates", "default_bundle", "detect_value",
    "eda_perturb", "extract_lu_examples", "fuzzy_ratio", "load_corpus",
    "load_multiwoz", "make_record", "number_to_spoken", "overall_f1",
    "parse_serialized_da", "predict", "records_from_corpus", "save_corpus",
    "sd_augment", "serialize_da", "slot_value_replace", "spoken_number",
    "sr_augment", "strip_case_punct", "tokenize", "tokenize_with_spans",
    "tp_augment", "train_lexicon_lu", "wp_augment",
]
