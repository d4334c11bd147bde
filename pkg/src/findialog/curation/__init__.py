from .dedup import Removal, counter_cosine, dedup, normalize_for_grams, trigram_counts
from .extract import extract_questions
from .review import QuestionStore, add_expert_question, apply_verdict, build_review_batch
from .types import BatchEntry, QuestionRecord, ReviewBatch, Verdict

__all__ = [
    "Removal",
    "counter_cosine",
    "dedup",
    "normalize_for_grams",
    "trigram_counts",
    "extract_questions",
    "QuestionStore",
    "add_expert_question",
    "apply_verdict",
    "build_review_batch",
    "BatchEntry",
    "QuestionRecord",
    "ReviewBatch",
    "Verdict",
]
