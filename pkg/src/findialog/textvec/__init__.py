from .cluster import (
    ClusteringResult,
    SeededKMeans,
    default_k,
    kmeans,
    representatives,
    top_terms,
)
from .sparse import SparseVector, cosine
from .tfidf import CjkTfidfVectorizer, Vocabulary, fit_vocabulary, vectorize
from .tokenize import tokenize

__all__ = [
    "ClusteringResult",
    "SeededKMeans",
    "default_k",
    "kmeans",
    "representatives",
    "top_terms",
    "SparseVector",
    "cosine",
    "CjkTfidfVectorizer",
    "Vocabulary",
    "fit_vocabulary",
    "vectorize",
    "tokenize",
]
