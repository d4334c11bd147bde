"""Input validation helpers shared by the estimator classes."""

from __future__ import annotations

from typing import Sequence

from ..errors import KTooLarge
from .sparse import SparseVector


def check_documents(docs: Sequence[str]) -> list[str]:
    docs = list(docs)
    if not docs:
        raise ValueError("docs must be nonempty")
    if not all(isinstance(d, str) for d in docs):
        raise TypeError("docs must be strings")
    return docs


def check_vectors(vectors: Sequence[SparseVector]) -> list[SparseVector]:
    vectors = list(vectors)
    if not all(isinstance(v, SparseVector) for v in vectors):
        raise TypeError("vectors must be SparseVector instances")
    return vectors


def check_k(k: int, n_nonzero: int) -> None:
    if k < 1:
        raise ValueError("k must be positive")
    if k > n_nonzero:
        raise KTooLarge(f"k={k} exceeds {n_nonzero} nonzero vectors")


def check_is_fitted(estimator, attribute: str) -> None:
    if getattr(estimator, attribute, None) is None:
        raise RuntimeError(f"{type(estimator).__name__} is not fitted; call fit() first")
