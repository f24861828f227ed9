"""
Векторные примитивы: косинусная близость, нормировка и матрицы близости.

Все функции чистые, результаты неизменяемые, поэтому их можно вызывать
из нескольких потоков/воркеров одновременно.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import DimensionMismatchError, DuplicateItemError, ZeroNormError

# значения ближе этого порога считаются равными, ничья решается по id
TIE_TOLERANCE = 1e-12


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class EmbeddingVector:
    """
    Вектор-эмбеддинг с идентификатором элемента.

    `label` заполняется только для синтетических данных (номер кластера).
    """

    id: str
    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        values = _frozen_array(self.values)
        if values.ndim != 1 or values.size < 1:
            raise DimensionMismatchError(
                f"Embedding {self.id!r} must be a non-empty 1-D vector"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Embedding {self.id!r} has non-finite coordinates")
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return int(self.values.size)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __repr__(self):
        return f"EmbeddingVector(id={self.id!r}, dim={self.dim}, label={self.label!r})"


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """
    Плотная симметричная матрица косинусных близостей, строки и столбцы
    идут в порядке `order`.
    """

    order: tuple[str, ...]
    entries: np.ndarray
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "entries", _frozen_array(self.entries))
        object.__setattr__(
            self, "_index", {item_id: i for i, item_id in enumerate(self.order)}
        )

    def __len__(self):
        return len(self.order)

    def position(self, item_id: str) -> int:
        return self._index[item_id]

    def get(self, a: str, b: str) -> float:
        return float(self.entries[self._index[a], self._index[b]])


def ensure_unique_ids(vectors: Iterable[EmbeddingVector]) -> None:
    seen = set()
    for vector in vectors:
        if vector.id in seen:
            raise DuplicateItemError(f"Duplicate item id {vector.id!r}")
        seen.add(vector.id)


def id_ranks(ids: Sequence[str]) -> np.ndarray:
    """
    Ранг каждого id в порядке возрастания; нужен как ключ для разрешения ничьих.
    """
    ranks = np.empty(len(ids), dtype=np.int64)
    for rank, position in enumerate(sorted(range(len(ids)), key=ids.__getitem__)):
        ranks[position] = rank
    return ranks


def top_positions(scores, ranks: np.ndarray, limit: int) -> list[int]:
    """
    Позиции `limit` наибольших значений `scores` по убыванию. Значения в пределах
    TIE_TOLERANCE от текущего максимума равны, из них берётся младший id (`ranks`).
    """
    scores = np.asarray(scores, dtype=np.float64)
    alive = np.ones(len(scores), dtype=bool)
    picked = []
    for _ in range(min(limit, len(scores))):
        candidates = np.flatnonzero(alive)
        best = scores[candidates].max()
        tied = candidates[scores[candidates] >= best - TIE_TOLERANCE]
        pick = int(tied[np.argmin(ranks[tied])])
        alive[pick] = False
        picked.append(pick)
    return picked


def ensure_same_dim(vectors: Sequence[EmbeddingVector], dim: int | None = None) -> int:
    """
    Проверяет, что у всех векторов одна размерность, и возвращает её.
    """
    if dim is None and vectors:
        dim = vectors[0].dim
    for vector in vectors:
        if vector.dim != dim:
            raise DimensionMismatchError(
                f"Embedding {vector.id!r} has dimension {vector.dim}, expected {dim}"
            )
    return dim


def stack_normalized(vectors: Sequence[EmbeddingVector]) -> np.ndarray:
    """
    Матрица V (N×d) из нормированных строк; нулевая норма -> ZeroNormError
    с идентификатором виновника.
    """
    matrix = np.array([vector.values for vector in vectors], dtype=np.float64)
    norms = np.linalg.norm(matrix, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        bad = vectors[int(zero[0])].id
        raise ZeroNormError(f"Embedding {bad!r} has zero norm", item_id=bad)
    return matrix / norms[:, None]


def _clip(value):
    return np.clip(value, -1.0, 1.0)


def cosine_similarity(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.dim != b.dim:
        raise DimensionMismatchError(
            f"Cannot compare {a.id!r} (d={a.dim}) with {b.id!r} (d={b.dim})"
        )
    for vector in (a, b):
        if vector.norm == 0.0:
            raise ZeroNormError(
                f"Embedding {vector.id!r} has zero norm", item_id=vector.id
            )
    value = float(np.dot(a.values, b.values)) / (a.norm * b.norm)
    return float(_clip(value))


def normalize(v: EmbeddingVector) -> EmbeddingVector:
    norm = v.norm
    if norm == 0.0:
        raise ZeroNormError(f"Embedding {v.id!r} has zero norm", item_id=v.id)
    return EmbeddingVector(id=v.id, values=v.values / norm, label=v.label)


def similarity_matrix(vectors: Sequence[EmbeddingVector]) -> SimilarityMatrix:
    """
    S = V·V^T по нормированным строкам.
    """
    if not vectors:
        raise ValueError("similarity_matrix needs at least one vector")
    ensure_same_dim(vectors)
    unit = stack_normalized(vectors)
    entries = _clip(unit @ unit.T)
    # симметрия и единичная диагональ точно, а не с точностью до округления
    entries = (entries + entries.T) / 2.0
    np.fill_diagonal(entries, 1.0)
    return SimilarityMatrix(order=tuple(v.id for v in vectors), entries=entries)


def query_similarities(
    q: EmbeddingVector, vectors: Sequence[EmbeddingVector]
) -> list[float]:
    if not vectors:
        return []
    ensure_same_dim(vectors, q.dim)
    if q.norm == 0.0:
        raise ZeroNormError(f"Query {q.id!r} has zero norm", item_id=q.id)
    unit = stack_normalized(vectors)
    sims = _clip(unit @ (q.values / q.norm))
    return [float(value) for value in sims]
