"""
Синтетические данные для экспериментов: гауссовы кластеры и составной запрос.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import ConfigError, DatasetError
from .geometry import EmbeddingVector

logger = logging.getLogger(__name__)

RING = "ring"
RANDOM = "random"
PLACEMENT_RETRIES = 1000
NORM_EPSILON = 1e-12


@dataclass(frozen=True)
class SyntheticDatasetSpec:
    num_points: int = 200
    dim: int = 2
    num_clusters: int = 5
    cluster_std: float = 0.5
    separation: float = 5.0
    rng_seed: int = 42
    layout: str = RING
    # расстояние центра раскладки от начала координат вдоль диагонали (1, ..., 1)
    offset: float = 0.0

    def __post_init__(self):
        if self.num_points < 1 or self.dim < 1 or self.num_clusters < 1:
            raise ConfigError("num_points, dim and num_clusters must be positive")
        if self.num_clusters > self.num_points:
            raise ConfigError(
                f"num_clusters ({self.num_clusters}) exceeds num_points ({self.num_points})"
            )
        if not self.cluster_std > 0 or not self.separation > 0:
            raise ConfigError("cluster_std and separation must be positive")
        if self.layout not in (RING, RANDOM):
            raise ConfigError(f"Unknown layout {self.layout!r}")
        if self.layout == RING and self.dim < 2 and self.num_clusters > 1:
            raise ConfigError("A ring layout with several clusters needs dim >= 2")

    def to_dict(self):
        return asdict(self)


def _layout_centre(spec: SyntheticDatasetSpec) -> np.ndarray:
    return np.full(spec.dim, spec.offset / math.sqrt(spec.dim))


def _ring_centroids(spec: SyntheticDatasetSpec, rng) -> np.ndarray:
    """
    Центроиды на окружности в первых двух координатах; соседние ровно
    на расстоянии separation друг от друга.
    """
    centre = _layout_centre(spec)
    count = spec.num_clusters
    if count == 1:
        return centre[None, :].copy()
    radius = spec.separation / (2 * math.sin(math.pi / count))
    phase = rng.uniform(0, 2 * math.pi)
    centroids = np.tile(centre, (count, 1))
    for i in range(count):
        angle = phase + 2 * math.pi * i / count
        centroids[i, 0] += radius * math.cos(angle)
        if spec.dim > 1:
            centroids[i, 1] += radius * math.sin(angle)
    return centroids


def _random_centroids(spec: SyntheticDatasetSpec, rng) -> np.ndarray:
    """
    Отбор с отклонением в кубе вокруг центра раскладки.
    """
    centre = _layout_centre(spec)
    half_width = spec.separation * max(1.0, spec.num_clusters ** (1 / spec.dim))
    centroids = []
    for _ in range(PLACEMENT_RETRIES):
        candidate = centre + rng.uniform(-half_width, half_width, size=spec.dim)
        if all(np.linalg.norm(candidate - c) >= spec.separation for c in centroids):
            centroids.append(candidate)
            if len(centroids) == spec.num_clusters:
                return np.array(centroids)
    raise DatasetError(
        f"Could not place {spec.num_clusters} centroids {spec.separation} apart "
        f"after {PLACEMENT_RETRIES} attempts"
    )


def generate_clusters(spec: SyntheticDatasetSpec) -> list[EmbeddingVector]:
    """
    Изотропные гауссовы кластеры; у каждой точки метка кластера.
    Детерминированно при одном и том же rng_seed.
    """
    rng = np.random.default_rng(spec.rng_seed)
    if spec.layout == RING:
        centroids = _ring_centroids(spec, rng)
    else:
        centroids = _random_centroids(spec, rng)

    sizes = [spec.num_points // spec.num_clusters] * spec.num_clusters
    for i in range(spec.num_points % spec.num_clusters):
        sizes[i] += 1

    width = len(str(spec.num_points - 1))
    points = []
    for label, (centroid, size) in enumerate(zip(centroids, sizes)):
        for _ in range(size):
            values = rng.normal(centroid, spec.cluster_std)
            # нулевая норма имеет меру ноль, но тогда просто перевыбираем
            while np.linalg.norm(values) <= NORM_EPSILON:
                values = rng.normal(centroid, spec.cluster_std)
            points.append(
                EmbeddingVector(
                    id=f"p{len(points):0{width}d}", values=values, label=label
                )
            )
    logger.info(
        "Generated %d points in %d clusters (dim=%d, seed=%d)",
        len(points),
        spec.num_clusters,
        spec.dim,
        spec.rng_seed,
    )
    return points


def composite_query(
    dataset: list[EmbeddingVector], rng_seed: int, clusters=None
) -> EmbeddingVector:
    """
    Среднее по одному случайному представителю из каждого кластера.
    `clusters` ограничивает набор кластеров (например, запрос по одному кластеру).
    """
    members: dict[int, list[EmbeddingVector]] = {}
    for vector in dataset:
        if vector.label is None:
            raise DatasetError(f"Point {vector.id!r} has no cluster label")
        members.setdefault(vector.label, []).append(vector)
    labels = sorted(members) if clusters is None else sorted(set(clusters))
    for label in labels:
        if not members.get(label):
            raise DatasetError(f"Cluster {label!r} has no members")

    rng = np.random.default_rng(rng_seed)
    for _ in range(PLACEMENT_RETRIES):
        picks = [members[label][rng.integers(len(members[label]))] for label in labels]
        mean = np.mean([pick.values for pick in picks], axis=0)
        if np.linalg.norm(mean) > NORM_EPSILON:
            return EmbeddingVector(id="query", values=mean)
    raise DatasetError("Composite query keeps landing on the origin")
