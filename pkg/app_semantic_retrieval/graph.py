"""
Семантический граф поверх эмбеддингов: kNN-рёбра, символические рёбра между
кластерами, нормированная матрица смежности, Personalized PageRank и
случайные блуждания.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .exceptions import ConfigError, ConvergenceError, DatasetError, UnknownItemError
from .geometry import (
    EmbeddingVector,
    ensure_same_dim,
    ensure_unique_ids,
    id_ranks,
    stack_normalized,
    top_positions,
)

logger = logging.getLogger(__name__)

# вес ребра не может быть <= 0, иначе строку не отнормировать
EDGE_WEIGHT_FLOOR = 1e-9


class EdgeKind(str, enum.Enum):
    KNN = "knn"
    SYMBOLIC = "symbolic"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    weight: float
    kind: EdgeKind

    @property
    def key(self):
        return self.source, self.target, self.kind


@dataclass(frozen=True, eq=False)
class SemanticGraph:
    nodes: tuple[EmbeddingVector, ...]
    edges: tuple[Edge, ...] = ()
    cluster_heads: tuple[str, ...] | None = None
    _index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        if self.cluster_heads is not None:
            object.__setattr__(self, "cluster_heads", tuple(self.cluster_heads))
        ensure_unique_ids(self.nodes)
        ensure_same_dim(self.nodes)
        object.__setattr__(
            self, "_index", {node.id: i for i, node in enumerate(self.nodes)}
        )
        self._validate_edges()

    def _validate_edges(self):
        seen = set()
        for edge in self.edges:
            if edge.source not in self._index or edge.target not in self._index:
                raise UnknownItemError(
                    f"Edge {edge.source!r} -> {edge.target!r} has an unknown endpoint"
                )
            if edge.source == edge.target:
                raise ConfigError(f"Self-loop on {edge.source!r} is not allowed")
            if not math.isfinite(edge.weight) or edge.weight <= 0:
                raise ConfigError(
                    f"Edge {edge.source!r} -> {edge.target!r} has weight {edge.weight!r}"
                )
            if edge.key in seen:
                raise ConfigError(f"Duplicate edge {edge.key!r}")
            seen.add(edge.key)
        for head in self.cluster_heads or ():
            if head not in self._index:
                raise UnknownItemError(f"Cluster head {head!r} is not a graph node")

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(node.id for node in self.nodes)

    def __contains__(self, item_id):
        return item_id in self._index

    def position(self, item_id: str) -> int:
        try:
            return self._index[item_id]
        except KeyError:
            raise UnknownItemError(f"Node {item_id!r} is not in the graph") from None

    def node(self, item_id: str) -> EmbeddingVector:
        return self.nodes[self.position(item_id)]

    def edges_of_kind(self, kind: EdgeKind) -> list[Edge]:
        return [edge for edge in self.edges if edge.kind == kind]

    def neighbors(self, item_ids: Iterable[str]) -> set[str]:
        """
        Исходящие соседи множества узлов, N(V_q).
        """
        item_ids = set(item_ids)
        return {edge.target for edge in self.edges if edge.source in item_ids}

    def with_edges(self, new_edges: Iterable[Edge], **changes) -> "SemanticGraph":
        """
        Новый граф с добавленными рёбрами; повторы (source, target, kind)
        молча отбрасываются.
        """
        merged = {edge.key: edge for edge in self.edges}
        for edge in new_edges:
            merged.setdefault(edge.key, edge)
        return replace(self, edges=tuple(merged.values()), **changes)


@dataclass(frozen=True, eq=False)
class NormalizedAdjacency:
    order: tuple[str, ...]
    matrix: np.ndarray
    dangling: frozenset[str]

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=np.float64)
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    def position(self, item_id: str) -> int:
        try:
            return self.order.index(item_id)
        except ValueError:
            raise UnknownItemError(f"Node {item_id!r} is not in the graph") from None

    @property
    def dangling_mask(self) -> np.ndarray:
        return np.array([item_id in self.dangling for item_id in self.order])


@dataclass(frozen=True)
class PprConfig:
    alpha: float = 0.15
    tolerance: float = 1e-10
    max_iterations: int = 10_000

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise ConfigError(
                f"max_iterations must be >= 1, got {self.max_iterations!r}"
            )


@dataclass(frozen=True, eq=False)
class SeedVector:
    order: tuple[str, ...]
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=np.float64)
        if weights.shape != (len(self.order),):
            raise ConfigError("Seed weights must match the node order")
        if np.any(weights < 0) or not np.any(weights > 0):
            raise ConfigError("Seed weights must be non-negative with a positive entry")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise ConfigError(f"Seed weights sum to {weights.sum()!r}, expected 1")
        weights.setflags(write=False)
        object.__setattr__(self, "order", tuple(self.order))
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, order: Sequence[str], item_ids: Iterable[str]) -> "SeedVector":
        order = tuple(order)
        index = {item_id: i for i, item_id in enumerate(order)}
        weights = np.zeros(len(order))
        item_ids = list(dict.fromkeys(item_ids))
        if not item_ids:
            raise ConfigError("Seed needs at least one node")
        for item_id in item_ids:
            if item_id not in index:
                raise UnknownItemError(f"Seed node {item_id!r} is not in the graph")
            weights[index[item_id]] = 1.0 / len(item_ids)
        return cls(order=order, weights=weights)

    @classmethod
    def one_hot(cls, order: Sequence[str], item_id: str) -> "SeedVector":
        return cls.uniform(order, [item_id])


def seed_from_pool(pool, order: Sequence[str], size: int = 5) -> SeedVector:
    """
    Мягкий seed: равные веса на `size` кандидатов пула, ближайших к запросу.
    """
    if size < 1:
        raise ConfigError(f"Seed size must be positive, got {size!r}")
    nearest = top_positions(pool.query_sims, id_ranks(pool.ids), size)
    top = [pool.ids[i] for i in nearest]
    return SeedVector.uniform(order, top)


def _floored(similarity: float) -> float:
    return max(float(similarity), EDGE_WEIGHT_FLOOR)


def _sim_matrix(nodes: Sequence[EmbeddingVector]) -> np.ndarray:
    unit = stack_normalized(nodes)
    return np.clip(unit @ unit.T, -1.0, 1.0)


def build_knn_graph(nodes: Sequence[EmbeddingVector], k: int) -> SemanticGraph:
    """
    Каждый узел получает ровно k исходящих рёбер к самым близким по косинусу
    соседям (ничьи по возрастанию id).
    """
    nodes = tuple(nodes)
    if k < 1 or k >= len(nodes):
        raise ConfigError(f"kNN graph needs 1 <= k < {len(nodes)}, got {k}")
    ensure_unique_ids(nodes)
    ensure_same_dim(nodes)
    sims = _sim_matrix(nodes)
    ranks = id_ranks([node.id for node in nodes])

    edges = []
    for i, node in enumerate(nodes):
        row = sims[i].copy()
        row[i] = -np.inf
        nearest = top_positions(row, ranks, k)
        edges.extend(
            Edge(node.id, nodes[j].id, _floored(row[j]), EdgeKind.KNN) for j in nearest
        )
    logger.debug("kNN graph: %d nodes, %d edges (k=%d)", len(nodes), len(edges), k)
    return SemanticGraph(nodes=nodes, edges=tuple(edges))


def elect_cluster_heads(nodes: Sequence[EmbeddingVector]) -> list[str]:
    """
    Голова кластера: участник с максимальной косинусной близостью к среднему
    вектору кластера. Порядок результата по возрастанию метки кластера.
    """
    clusters: dict[int, list[EmbeddingVector]] = {}
    for node in nodes:
        if node.label is None:
            raise DatasetError(f"Node {node.id!r} has no cluster label")
        clusters.setdefault(node.label, []).append(node)

    heads = []
    for label in sorted(clusters):
        members = clusters[label]
        if not members:
            raise DatasetError(f"Cluster {label!r} is empty")
        centroid = np.mean([member.values for member in members], axis=0)
        centroid_norm = np.linalg.norm(centroid)
        if centroid_norm == 0.0:
            # центр в нуле: все участники равноудалены, берём младший id
            heads.append(min(member.id for member in members))
            continue
        unit = stack_normalized(members)
        sims = unit @ (centroid / centroid_norm)
        ranks = id_ranks([member.id for member in members])
        heads.append(members[top_positions(sims, ranks, 1)[0]].id)
    return heads


def _both_ways(a: str, b: str, weight: float) -> list[Edge]:
    return [
        Edge(a, b, weight, EdgeKind.SYMBOLIC),
        Edge(b, a, weight, EdgeKind.SYMBOLIC),
    ]


def add_symbolic_edges_sparse(
    graph: SemanticGraph, heads: Sequence[str], m: int
) -> SemanticGraph:
    """
    Каждая голова связывается с m самыми похожими головами других кластеров.
    """
    heads = list(dict.fromkeys(heads))
    if not heads:
        raise ConfigError("Sparse symbolic linking needs at least one cluster head")
    if m < 1 or m >= len(heads):
        raise ConfigError(f"symbolic m must satisfy 1 <= m < {len(heads)}, got {m}")
    head_nodes = [graph.node(head) for head in heads]
    sims = _sim_matrix(head_nodes)
    ranks = id_ranks(heads)

    new_edges = []
    for i, head in enumerate(heads):
        row = sims[i].copy()
        row[i] = -np.inf
        for j in top_positions(row, ranks, m):
            new_edges.extend(_both_ways(head, heads[j], _floored(row[j])))
    return graph.with_edges(new_edges, cluster_heads=tuple(heads))


def add_symbolic_edges_dense(
    graph: SemanticGraph, heads: Sequence[str], threshold: float = 0.85
) -> SemanticGraph:
    """
    Ребро голова <-> узел другого кластера, если их косинус строго больше порога.
    """
    if not -1 < threshold < 1:
        raise ConfigError(f"threshold must lie in (-1, 1), got {threshold!r}")
    unlabeled = [node.id for node in graph.nodes if node.label is None]
    if unlabeled:
        raise DatasetError(
            f"Dense symbolic linking needs cluster labels, {unlabeled[0]!r} has none"
        )
    heads = list(dict.fromkeys(heads))
    unit = stack_normalized(graph.nodes)
    labels = np.array([node.label for node in graph.nodes])

    new_edges = []
    for head in heads:
        h = graph.position(head)
        sims = np.clip(unit @ unit[h], -1.0, 1.0)
        linked = np.flatnonzero((labels != labels[h]) & (sims > threshold))
        for j in linked:
            new_edges.extend(_both_ways(head, graph.nodes[j].id, _floored(sims[j])))
    logger.debug(
        "dense symbolic linking at %.3f added up to %d edges", threshold, len(new_edges)
    )
    return graph.with_edges(new_edges, cluster_heads=tuple(heads))


def normalize_adjacency(graph: SemanticGraph) -> NormalizedAdjacency:
    """
    Строка i: веса исходящих рёбер узла i, делённые на их сумму. Параллельные
    рёбра (knn + symbolic) суммируются до нормировки.
    """
    n = len(graph.nodes)
    weights = np.zeros((n, n))
    for edge in graph.edges:
        weights[graph.position(edge.source), graph.position(edge.target)] += edge.weight
    totals = weights.sum(axis=1)
    dangling = totals == 0
    matrix = np.divide(
        weights, totals[:, None], out=np.zeros_like(weights), where=~dangling[:, None]
    )
    return NormalizedAdjacency(
        order=graph.ids,
        matrix=matrix,
        dangling=frozenset(graph.ids[i] for i in np.flatnonzero(dangling)),
    )


def personalized_pagerank(
    adj: NormalizedAdjacency, seed: SeedVector, config: PprConfig | None = None
) -> list[tuple[str, float]]:
    """
    Степенной метод для r = α·s + (1−α)·Aᵀr. Масса висячих узлов
    на каждой итерации возвращается в seed, так что Σr = 1.
    """
    config = config or PprConfig()
    if tuple(seed.order) != tuple(adj.order):
        raise ConfigError("Seed order does not match the adjacency order")

    transposed = adj.matrix.T
    s = seed.weights
    dangling = adj.dangling_mask
    alpha = config.alpha

    r = s.copy()
    residual = math.inf
    for iteration in range(1, config.max_iterations + 1):
        following = alpha * s + (1 - alpha) * (transposed @ r + r[dangling].sum() * s)
        residual = float(np.abs(following - r).sum())
        r = following
        if residual < config.tolerance:
            logger.debug("PPR converged in %d iterations", iteration)
            return list(zip(adj.order, (float(value) for value in r)))

    raise ConvergenceError(
        f"PPR did not converge in {config.max_iterations} iterations "
        f"(L1 residual {residual:.3e})",
        residual=residual,
        iterations=config.max_iterations,
    )


def random_walk_expand(
    graph: SemanticGraph,
    seeds: Iterable[str],
    walk_length: int,
    num_walks: int,
    rng_seed: int,
) -> list[tuple[str, int]]:
    """
    Блуждания ограниченной длины из каждого seed-узла. Считаются посещения
    узлов после каждого шага; на висячем узле блуждание обрывается.
    """
    seeds = sorted(set(seeds))
    if not seeds:
        raise ConfigError("Random walks need at least one seed node")
    if walk_length < 1 or num_walks < 1:
        raise ConfigError("walk_length and num_walks must be positive")
    for seed in seeds:
        graph.position(seed)

    adj = normalize_adjacency(graph)
    rng = np.random.default_rng(rng_seed)
    n = len(adj.order)
    counts = np.zeros(n, dtype=np.int64)
    for seed in seeds:
        start = graph.position(seed)
        for _ in range(num_walks):
            current = start
            for _ in range(walk_length):
                row = adj.matrix[current]
                if not row.any():
                    break
                current = int(rng.choice(n, p=row))
                counts[current] += 1

    visited = [(adj.order[i], int(counts[i])) for i in np.flatnonzero(counts)]
    return sorted(visited, key=lambda pair: (-pair[1], pair[0]))


def walk_distribution(visits: Sequence[tuple[str, int]]) -> list[tuple[str, float]]:
    """
    Частоты посещений -> распределение, которое можно подставить как S_graph.
    """
    total = sum(count for _, count in visits)
    if total == 0:
        return []
    return [(item_id, count / total) for item_id, count in visits]
