"""
Гибридное ранжирование: R(v|q) = (1−β)·S_vec(v, q) + β·S_graph(v, q),
плюс метрики релевантности и разнообразия для отчётов.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .candidates import CandidatePool
from .exceptions import ConfigError, UnknownItemError
from .geometry import EmbeddingVector, cosine_similarity, query_similarities, stack_normalized
from .graph import (
    PprConfig,
    SeedVector,
    SemanticGraph,
    normalize_adjacency,
    personalized_pagerank,
    random_walk_expand,
    walk_distribution,
)

logger = logging.getLogger(__name__)


class Method(str, enum.Enum):
    TOPK_ANN = "topk_ann"
    SEMANTIC_COMPRESSION = "semantic_compression"
    GRAPH_PPR = "graph_ppr"
    HYBRID = "hybrid"

    def __str__(self):
        return self.value


class Diffusion(str, enum.Enum):
    PPR = "ppr"
    WALKS = "walks"


@dataclass(frozen=True)
class HybridConfig:
    beta: float = 1.0
    k: int = 10
    rescale_graph: bool = False
    diffusion: Diffusion = Diffusion.PPR
    walk_length: int = 5
    num_walks: int = 200
    walk_seed: int = 0

    def __post_init__(self):
        if not 0 <= self.beta <= 1:
            raise ConfigError(f"beta must lie in [0, 1], got {self.beta!r}")
        if self.k < 1:
            raise ConfigError(f"k must be positive, got {self.k!r}")
        object.__setattr__(self, "diffusion", Diffusion(self.diffusion))


@dataclass(frozen=True)
class ScoredItem:
    id: str
    score: float


@dataclass(frozen=True)
class RetrievalResult:
    method: Method
    items: tuple[ScoredItem, ...]
    relevance: float
    diversity: float

    @property
    def ids(self) -> list[str]:
        return [item.id for item in self.items]


def vec_score(v: EmbeddingVector, q: EmbeddingVector) -> float:
    return cosine_similarity(v, q)


def graph_score(ppr: Sequence[tuple[str, float]] | Mapping[str, float], v: str) -> float:
    """
    Масса PPR в узле v; узел вне области ранжирования получает 0.
    """
    scores = ppr if isinstance(ppr, Mapping) else dict(ppr)
    return float(scores.get(v, 0.0))


def hybrid_score(
    v: str,
    q: EmbeddingVector,
    ppr,
    config: HybridConfig,
    vectors: Mapping[str, EmbeddingVector],
) -> float:
    try:
        vector = vectors[v]
    except KeyError:
        raise UnknownItemError(f"No embedding stored for {v!r}") from None
    beta = config.beta
    return (1 - beta) * vec_score(vector, q) + beta * graph_score(ppr, v)


def relevance_metric(items: Sequence[EmbeddingVector], q: EmbeddingVector) -> float:
    """
    Средний косинус между найденными элементами и запросом.
    """
    if not items:
        raise ConfigError("Relevance of an empty result is undefined")
    return float(np.mean(query_similarities(q, items)))


def diversity_metric(items: Sequence[EmbeddingVector]) -> float:
    """
    Единица минус средний косинус по неупорядоченным парам различных элементов.
    """
    if len(items) < 2:
        raise ConfigError("Diversity needs at least two items")
    unit = stack_normalized(items)
    sims = np.clip(unit @ unit.T, -1.0, 1.0)
    upper = np.triu_indices(len(items), k=1)
    return float(1.0 - sims[upper].mean())


def build_result(
    method: Method,
    scored: Sequence[ScoredItem],
    vectors: Mapping[str, EmbeddingVector],
    query: EmbeddingVector,
) -> RetrievalResult:
    """
    Собирает RetrievalResult и считает метрики по сохранённым эмбеддингам.
    Для одного элемента разнообразие равно 0 (пар нет).
    """
    picked = [vectors[item.id] for item in scored]
    return RetrievalResult(
        method=Method(method),
        items=tuple(scored),
        relevance=relevance_metric(picked, query),
        diversity=diversity_metric(picked) if len(picked) > 1 else 0.0,
    )


def _graph_scores(
    graph: SemanticGraph, seed: SeedVector, ppr_config: PprConfig, config: HybridConfig
) -> dict[str, float]:
    if config.diffusion == Diffusion.WALKS:
        seeds = [item_id for item_id, w in zip(seed.order, seed.weights) if w > 0]
        visits = random_walk_expand(
            graph, seeds, config.walk_length, config.num_walks, config.walk_seed
        )
        return dict(walk_distribution(visits))
    return dict(personalized_pagerank(normalize_adjacency(graph), seed, ppr_config))


def rank_hybrid(
    pool: CandidatePool,
    graph: SemanticGraph,
    seed: SeedVector,
    ppr_config: PprConfig,
    config: HybridConfig,
    method: Method | None = None,
) -> RetrievalResult:
    """
    Ранжирует V_q ∪ N(V_q): пул первой стадии и его соседей в графе.
    Без явного `method` результат помечается graph_ppr при β = 1, иначе hybrid.
    """
    missing = [item_id for item_id in pool.ids if item_id not in graph]
    if missing:
        raise UnknownItemError(f"Pool item {missing[0]!r} is not a graph node")

    graph_scores = _graph_scores(graph, seed, ppr_config, config)

    scope = list(pool.ids)
    scope += sorted(graph.neighbors(pool.ids) - set(scope))
    if config.k > len(scope):
        raise ConfigError(f"Cannot return {config.k} items from a scope of {len(scope)}")

    vectors = {item_id: graph.node(item_id) for item_id in scope}
    vec = np.array(query_similarities(pool.query, [vectors[i] for i in scope]))
    structural = np.array([graph_scores.get(item_id, 0.0) for item_id in scope])
    if config.rescale_graph:
        low, high = structural.min(), structural.max()
        structural = (
            (structural - low) / (high - low) if high > low else np.zeros_like(structural)
        )

    beta = config.beta
    combined = (1 - beta) * vec + beta * structural
    ranked = sorted(range(len(scope)), key=lambda i: (-combined[i], scope[i]))
    scored = [ScoredItem(scope[i], float(combined[i])) for i in ranked[: config.k]]

    if method is None:
        method = Method.GRAPH_PPR if beta == 1 else Method.HYBRID
    logger.debug(
        "rank_hybrid beta=%.2f scope=%d pool=%d", beta, len(scope), len(pool)
    )
    return build_result(method, scored, vectors, pool.query)
