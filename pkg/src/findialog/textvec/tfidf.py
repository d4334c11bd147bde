"""TF-IDF vectorization over the CJK-aware tokenizer.

Weights are tf(t) * idf(t) with the smoothed idf ln((1+N)/(1+df)) + 1, then
L2-normalized. Column order is lexicographic by term, which keeps the vector
space identical across platforms and runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from sklearn.base import BaseEstimator

from ..errors import EmptyVocabulary
from .sparse import SparseVector
from .tokenize import tokenize
from .validation import check_documents, check_is_fitted


@dataclass(frozen=True)
class Vocabulary:
    terms: dict[str, int]        # term -> column index, lexicographic
    doc_freq: dict[str, int]
    n_docs: int

    def __len__(self) -> int:
        return len(self.terms)

    def idf(self, term: str) -> float:
        return math.log((1 + self.n_docs) / (1 + self.doc_freq[term])) + 1.0

    @property
    def columns(self) -> list[str]:
        """Terms in column order."""
        return sorted(self.terms, key=self.terms.get)


def fit_vocabulary(docs: Sequence[str], min_df: int = 1) -> Vocabulary:
    docs = check_documents(docs)
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    df: dict[str, int] = {}
    for doc in docs:
        for term in set(tokenize(doc)):
            df[term] = df.get(term, 0) + 1
    kept = {t: c for t, c in df.items() if c >= min_df}
    if not kept:
        raise EmptyVocabulary(f"no term reaches min_df={min_df}")
    terms = {t: i for i, t in enumerate(sorted(kept))}
    return Vocabulary(terms=terms, doc_freq=kept, n_docs=len(docs))


def vectorize(text: str, vocab: Vocabulary) -> SparseVector:
    """L2-normalized tf-idf vector; unknown terms ignored; all-unknown -> zero vector."""
    tf: dict[int, float] = {}
    idf_cache: dict[int, float] = {}
    for term in tokenize(text):
        col = vocab.terms.get(term)
        if col is None:
            continue
        tf[col] = tf.get(col, 0.0) + 1.0
        if col not in idf_cache:
            idf_cache[col] = vocab.idf(term)
    weights = {col: count * idf_cache[col] for col, count in tf.items()}
    return SparseVector.from_counts(weights, normalize=True)


class CjkTfidfVectorizer(BaseEstimator):
    """Estimator facade over fit_vocabulary/vectorize.

    Parameters
    ----------
    min_df : int
        Minimum document frequency for a term to enter the vocabulary.
    """

    def __init__(self, min_df: int = 1):
        self.min_df = min_df

    def fit(self, raw_documents: Sequence[str], y=None) -> "CjkTfidfVectorizer":
        self.vocabulary_ = fit_vocabulary(raw_documents, min_df=self.min_df)
        return self

    def transform(self, raw_documents: Sequence[str]) -> list[SparseVector]:
        check_is_fitted(self, "vocabulary_")
        return [vectorize(doc, self.vocabulary_) for doc in raw_documents]

    def fit_transform(self, raw_documents: Sequence[str], y=None) -> list[SparseVector]:
        return self.fit(raw_documents).transform(raw_documents)

    def get_feature_names_out(self) -> list[str]:
        check_is_fitted(self, "vocabulary_")
        return self.vocabulary_.columns
