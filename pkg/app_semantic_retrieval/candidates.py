"""
Первая стадия поиска: пул из N кандидатов вокруг запроса.

Вместо настоящего ANN-движка здесь точный перебор. Любой движок, который
умеет `top_n(query, n) -> CandidatePool`, подходит на место индексов ниже.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .exceptions import ConfigError, DimensionMismatchError, ZeroNormError
from .geometry import (
    EmbeddingVector,
    SimilarityMatrix,
    ensure_same_dim,
    ensure_unique_ids,
    id_ranks,
    similarity_matrix,
    stack_normalized,
)

logger = logging.getLogger(__name__)

COSINE = "cosine"
EUCLIDEAN = "euclidean"


@dataclass(frozen=True, eq=False)
class CandidatePool:
    """
    Пул кандидатов: сами векторы, близости к запросу и попарная матрица.

    Для косинусного индекса кандидаты идут по убыванию `query_sims`
    (при равенстве по возрастанию id); для евклидова индекса по возрастанию
    расстояния до запроса, `ranked_by` говорит, какой порядок действует.
    """

    query: EmbeddingVector
    candidates: tuple[EmbeddingVector, ...]
    query_sims: np.ndarray
    pairwise: SimilarityMatrix
    ranked_by: str = COSINE

    def __len__(self):
        return len(self.candidates)

    @property
    def ids(self) -> tuple[str, ...]:
        return self.pairwise.order

    def position(self, item_id: str) -> int:
        return self.pairwise.position(item_id)

    def vector(self, item_id: str) -> EmbeddingVector:
        return self.candidates[self.position(item_id)]


class CandidateIndex(Protocol):
    def top_n(self, query: EmbeddingVector, n: int) -> CandidatePool: ...


class ExactCosineIndex:
    """
    Точный перебор по косинусной близости.
    """

    metric = COSINE

    def __init__(self, corpus: Sequence[EmbeddingVector]):
        if not corpus:
            raise ConfigError("Corpus must not be empty")
        ensure_unique_ids(corpus)
        self.corpus = tuple(corpus)
        self.dim = ensure_same_dim(self.corpus)
        self._id_rank = id_ranks([vector.id for vector in self.corpus])
        self._unit = stack_normalized(self.corpus)

    def _check_query(self, query: EmbeddingVector, n: int):
        if query.dim != self.dim:
            raise DimensionMismatchError(
                f"Query has dimension {query.dim}, corpus has {self.dim}"
            )
        if n < 1 or n > len(self.corpus):
            raise ConfigError(
                f"Requested {n} candidates from a corpus of {len(self.corpus)}"
            )

    def _query_sims(self, query: EmbeddingVector) -> np.ndarray:
        if query.norm == 0.0:
            raise ZeroNormError("Query has zero norm", item_id=query.id)
        return np.clip(self._unit @ (query.values / query.norm), -1.0, 1.0)

    def _ranking(self, query: EmbeddingVector, sims: np.ndarray) -> np.ndarray:
        # lexsort: последний ключ главный
        return np.lexsort((self._id_rank, -sims))

    def top_n(self, query: EmbeddingVector, n: int) -> CandidatePool:
        self._check_query(query, n)
        sims = self._query_sims(query)
        picked = self._ranking(query, sims)[:n]
        candidates = tuple(self.corpus[i] for i in picked)
        logger.debug("%s picked %d of %d items", type(self).__name__, n, len(self.corpus))
        return CandidatePool(
            query=query,
            candidates=candidates,
            query_sims=sims[picked].copy(),
            pairwise=similarity_matrix(candidates),
            ranked_by=self.metric,
        )


class ExactEuclideanIndex(ExactCosineIndex):
    """
    Точный перебор по евклидову расстоянию: так работает типичный L2-индекс.
    Близости в пуле всё равно косинусные.
    """

    metric = EUCLIDEAN

    def __init__(self, corpus: Sequence[EmbeddingVector]):
        super().__init__(corpus)
        self._raw = np.array([vector.values for vector in self.corpus])

    def _ranking(self, query: EmbeddingVector, sims: np.ndarray) -> np.ndarray:
        distances = np.linalg.norm(self._raw - query.values, axis=1)
        return np.lexsort((self._id_rank, distances))


INDEXES = {
    COSINE: ExactCosineIndex,
    EUCLIDEAN: ExactEuclideanIndex,
}


def build_index(corpus: Sequence[EmbeddingVector], metric: str = COSINE):
    try:
        index_class = INDEXES[metric]
    except KeyError:
        raise ConfigError(
            f"Unknown first-stage metric {metric!r}, expected one of {sorted(INDEXES)}"
        ) from None
    return index_class(corpus)


def top_n_candidates(
    query: EmbeddingVector, corpus: Sequence[EmbeddingVector], n: int
) -> CandidatePool:
    return ExactCosineIndex(corpus).top_n(query, n)
