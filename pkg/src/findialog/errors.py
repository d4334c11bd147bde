"""Shared exception taxonomy.

Every pipeline error carries a stable machine-readable ``code`` so the CLI
and HTTP layers can map failures without string matching.
"""

from __future__ import annotations


class PipelineError(Exception):
    """Base class for all findialog errors."""

    code = "error"

    def __init__(self, message: str = "", **detail):
        super().__init__(message or self.code)
        self.detail = detail


# gateway
class CassetteMiss(PipelineError):
    code = "cassette_miss"


class RateLimitedExhausted(PipelineError):
    code = "rate_limited_exhausted"


class TransportError(PipelineError):
    code = "transport"


class BadResponse(PipelineError):
    code = "bad_response"


# corpus
class Unreadable(PipelineError):
    code = "unreadable"


class EmptyDocument(PipelineError):
    code = "empty_document"


# dialogue synthesis
class TemplateError(PipelineError):
    code = "template_error"


class NoTurns(PipelineError):
    code = "no_turns"


class EmptyTurn(PipelineError):
    code = "empty_turn"


class SynthesisFailed(PipelineError):
    code = "synthesis_failed"


# textvec
class EmptyVocabulary(PipelineError):
    code = "empty_vocabulary"


class KTooLarge(PipelineError):
    code = "k_too_large"


# curation
class NothingPending(PipelineError):
    code = "nothing_pending"


class RevisionConflict(PipelineError):
    code = "revision_conflict"


class InvalidTransition(PipelineError):
    code = "invalid_transition"


class UnknownQuestion(PipelineError):
    code = "unknown_question"


class EmptyText(PipelineError):
    code = "empty_text"


# augmentation
class PoolExhausted(PipelineError):
    code = "pool_exhausted"


class StateLocked(PipelineError):
    code = "locked"


# stats / judge
class EmptyInput(PipelineError):
    code = "empty_input"


class NoScore(PipelineError):
    code = "no_score"


class OutOfRange(PipelineError):
    code = "out_of_range"


class AllFailed(PipelineError):
    code = "all_failed"


# store
class IoError(PipelineError):
    code = "io_error"


class RunNotFinished(PipelineError):
    code = "run_not_finished"


# service
class PortInUse(PipelineError):
    code = "port_in_use"
