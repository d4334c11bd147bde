"""Seeded k-means over sparse tf-idf vectors.

Fully deterministic: k-means++ initialization draws from a PCG64 generator
(numpy.random.Generator over numpy.random.PCG64, documented stream: one
``integers`` draw for the first centroid, then one ``random`` draw per
remaining centroid against the cumulative squared-distance mass), Lloyd
iterations use squared Euclidean distance, assignment ties break to the
lowest centroid index, and an emptied cluster is reseeded to the point
farthest from its current centroid. (vectors, k, seed) fixes the result
bit-for-bit on a given platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse as sp
from sklearn.base import BaseEstimator

from ..errors import KTooLarge
from .sparse import SparseVector
from .tfidf import Vocabulary
from .validation import check_is_fitted, check_k, check_vectors


@dataclass
class ClusteringResult:
    k: int
    centroids: np.ndarray            # (k, dim)
    assignments: list[int]
    inertia: float
    iterations: int
    rng_seed: int
    inertia_history: list[float] = field(default_factory=list)

    def members(self, cluster: int) -> list[int]:
        return [i for i, a in enumerate(self.assignments) if a == cluster]

    def sizes(self) -> list[int]:
        counts = [0] * self.k
        for a in self.assignments:
            counts[a] += 1
        return counts


def _to_csr(vectors: Sequence[SparseVector], dim: int | None = None) -> sp.csr_matrix:
    if dim is None:
        dim = 1 + max((v.entries[-1][0] for v in vectors if v.entries), default=-1)
        dim = max(dim, 1)
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for v in vectors:
        for idx, w in v.entries:
            indices.append(idx)
            data.append(w)
        indptr.append(len(indices))
    return sp.csr_matrix((np.asarray(data, dtype=np.float64),
                          np.asarray(indices, dtype=np.int64),
                          np.asarray(indptr, dtype=np.int64)),
                         shape=(len(vectors), dim))


def _sq_dists(X: sp.csr_matrix, x_sq: np.ndarray, center: np.ndarray) -> np.ndarray:
    d = x_sq - 2.0 * (X @ center) + float(center @ center)
    return np.maximum(d, 0.0)


def _all_sq_dists(X: sp.csr_matrix, x_sq: np.ndarray, C: np.ndarray) -> np.ndarray:
    D = x_sq[:, None] - 2.0 * (X @ C.T) + (C * C).sum(axis=1)[None, :]
    return np.maximum(D, 0.0)


def _plus_plus_init(X: sp.csr_matrix, x_sq: np.ndarray, k: int,
                    rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.zeros((k, X.shape[1]), dtype=np.float64)
    first = int(rng.integers(n))
    centers[0] = X[first].toarray().ravel()
    d2 = _sq_dists(X, x_sq, centers[0])
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            r = float(rng.random()) * total
            idx = int(np.searchsorted(np.cumsum(d2), r, side="right"))
            idx = min(idx, n - 1)
        centers[j] = X[idx].toarray().ravel()
        d2 = np.minimum(d2, _sq_dists(X, x_sq, centers[j]))
    return centers


def _repair_empty(X: sp.csr_matrix, x_sq: np.ndarray, C: np.ndarray,
                  labels: np.ndarray, k: int) -> np.ndarray:
    """Reseed emptied clusters to the farthest point; reassign until none empty."""
    tried: set[int] = set()
    for _ in range(2 * k + len(tried)):
        counts = np.bincount(labels, minlength=k)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return labels
        j = int(empty[0])
        dist = _sq_dists(X, x_sq, C[j])
        # farthest first; skip points whose departure would empty their own cluster
        for p in np.argsort(-dist, kind="stable"):
            p = int(p)
            if p in tried or counts[labels[p]] <= 1:
                continue
            tried.add(p)
            C[j] = X[p].toarray().ravel()
            break
        else:
            raise KTooLarge("cannot populate all clusters (too few distinct points)")
        labels = np.argmin(_all_sq_dists(X, x_sq, C), axis=1)
    raise KTooLarge("cannot populate all clusters (too few distinct points)")


def kmeans(vectors: Sequence[SparseVector], k: int, rng_seed: int,
           max_iter: int = 100, tol: float = 1e-6,
           dim: int | None = None) -> ClusteringResult:
    """Lloyd's algorithm with k-means++ seeding. Callers exclude zero vectors."""
    vectors = check_vectors(vectors)
    nonzero = sum(1 for v in vectors if not v.is_zero)
    check_k(k, nonzero)
    if any(v.is_zero for v in vectors):
        raise ValueError("zero vectors must be excluded by the caller")
    X = _to_csr(vectors, dim)
    x_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    C = _plus_plus_init(X, x_sq, k, rng)

    history: list[float] = []
    prev = np.inf
    labels = np.zeros(len(vectors), dtype=np.int64)
    iterations = 0
    for _ in range(max_iter):
        iterations += 1
        D = _all_sq_dists(X, x_sq, C)
        labels = np.argmin(D, axis=1)
        labels = _repair_empty(X, x_sq, C, labels, k)
        D = _all_sq_dists(X, x_sq, C)
        inertia = float(D[np.arange(len(vectors)), labels].sum())
        history.append(inertia)
        if prev - inertia < tol:
            break
        prev = inertia
        for j in range(k):
            members = np.flatnonzero(labels == j)
            C[j] = np.asarray(X[members].mean(axis=0)).ravel()
    return ClusteringResult(
        k=k,
        centroids=C,
        assignments=[int(a) for a in labels],
        inertia=history[-1],
        iterations=iterations,
        rng_seed=rng_seed,
        inertia_history=history,
    )


def representatives(result: ClusteringResult, vectors: Sequence[SparseVector],
                    per_cluster: int, rng_seed: int) -> list[list[int]]:
    """Per-cluster exemplars: nearest-to-centroid first, then a uniform
    sample without replacement of the remaining members (seeded PCG64).
    Clusters smaller than per_cluster return all members."""
    if per_cluster < 1:
        raise ValueError("per_cluster must be >= 1")
    vectors = check_vectors(vectors)
    X = _to_csr(vectors, result.centroids.shape[1])
    x_sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
    rng = np.random.Generator(np.random.PCG64(rng_seed))
    out: list[list[int]] = []
    for j in range(result.k):
        members = result.members(j)
        dist = _sq_dists(X, x_sq, result.centroids[j])
        nearest = min(members, key=lambda i: (dist[i], i))
        rest = [i for i in members if i != nearest]
        if len(members) <= per_cluster:
            out.append([nearest] + rest)
        else:
            picked = rng.choice(np.asarray(rest, dtype=np.int64),
                                size=per_cluster - 1, replace=False)
            out.append([nearest] + [int(p) for p in picked])
    return out


def default_k(n: int) -> int:
    """Cluster-count default: max(2, round(sqrt(n/2))), clamped to n."""
    import math
    if n < 1:
        raise ValueError("n must be positive")
    return min(n, max(2, round(math.sqrt(n / 2))))


def top_terms(centroid: np.ndarray, vocab: Vocabulary, n: int = 5) -> list[str]:
    """Top-n nonzero centroid columns by weight (ties break lexicographic)."""
    columns = vocab.columns
    order = np.argsort(-centroid, kind="stable")
    terms = []
    for col in order[: max(n * 2, n)]:
        if centroid[col] <= 0 or len(terms) >= n:
            break
        if col < len(columns):
            terms.append(columns[int(col)])
    return terms


class SeededKMeans(BaseEstimator):
    """Estimator facade over kmeans/representatives.

    Attributes after fit: ``cluster_centers_``, ``labels_``, ``inertia_``,
    ``n_iter_``, ``result_``.
    """

    def __init__(self, n_clusters: int = 8, rng_seed: int = 0,
                 max_iter: int = 100, tol: float = 1e-6):
        self.n_clusters = n_clusters
        self.rng_seed = rng_seed
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X: Sequence[SparseVector], y=None) -> "SeededKMeans":
        self.result_ = kmeans(X, self.n_clusters, self.rng_seed,
                              max_iter=self.max_iter, tol=self.tol)
        self.cluster_centers_ = self.result_.centroids
        self.labels_ = self.result_.assignments
        self.inertia_ = self.result_.inertia
        self.n_iter_ = self.result_.iterations
        return self

    def predict(self, X: Sequence[SparseVector]) -> list[int]:
        check_is_fitted(self, "result_")
        M = _to_csr(check_vectors(X), self.cluster_centers_.shape[1])
        m_sq = np.asarray(M.multiply(M).sum(axis=1)).ravel()
        D = _all_sq_dists(M, m_sq, self.cluster_centers_)
        return [int(a) for a in np.argmin(D, axis=1)]

    def fit_predict(self, X: Sequence[SparseVector], y=None) -> list[int]:
        return self.fit(X).labels_
