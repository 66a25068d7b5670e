"""Exception types shared across the toolkit."""

from __future__ import annotations


class LaugError(Exception):
    """Base class for all toolkit errors."""


class CorpusFormatError(LaugError):
    """Raised when a corpus file cannot be parsed into the native schema."""


class CorpusValidationError(LaugError):
    """A dialog or utterance violates a structural invariant.

    Carries enough context to point at the offending record.
    """

    def __init__(self, message: str, dialog_id: str | None = None,
                 turn_index: int | None = None):
        where = ""
        if dialog_id is not None:
            where = f" [dialog {dialog_id}"
            if turn_index is not None:
                where += f", turn {turn_index}"
            where += "]"
        super().__init__(message + where)
        self.dialog_id = dialog_id
        self.turn_index = turn_index


class SpanBoundaryError(CorpusValidationError):
    """A span annotation does not line up with token boundaries."""


class ResourceError(LaugError):
    """A bundled or user-supplied resource file is malformed."""


class NoCandidateError(LaugError):
    """A perturbation op has no legal move on this utterance."""


class NoSlotError(NoCandidateError):
    """Slot value replacement found no replaceable value item."""


class NoRepairableSlotError(NoCandidateError):
    """Repair-type disfluency found no span-annotated value to target."""


class GeneratorUnavailableError(LaugError):
    """The paraphrase generator endpoint failed or broke protocol."""


class ConfigError(LaugError):
    """Invalid run configuration (bad flag values, missing files)."""
