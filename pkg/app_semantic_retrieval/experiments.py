"""
Оркестрация экспериментов: синтетический корпус -> запрос -> первая стадия ->
top-k / семантическое сжатие / граф + PPR -> метрики.
"""

from __future__ import annotations

import contextlib
import logging
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Any

from .candidates import COSINE, EUCLIDEAN, CandidatePool, build_index
from .compression import (
    CompressionConfig,
    coverage_term,
    greedy_select,
    select_topk,
)
from .exceptions import ConfigError, RetrievalError
from .geometry import EmbeddingVector
from .graph import (
    PprConfig,
    SemanticGraph,
    add_symbolic_edges_dense,
    add_symbolic_edges_sparse,
    build_knn_graph,
    elect_cluster_heads,
    seed_from_pool,
)
from .hybrid import (
    Diffusion,
    HybridConfig,
    Method,
    RetrievalResult,
    ScoredItem,
    build_result,
    diversity_metric,
    rank_hybrid,
    relevance_metric,
)
from .synthetic import SyntheticDatasetSpec, composite_query, generate_clusters

logger = logging.getLogger(__name__)

SYMBOLIC_NONE = "none"
SYMBOLIC_SPARSE = "sparse"
SYMBOLIC_DENSE = "dense"
SYMBOLIC_MODES = (SYMBOLIC_NONE, SYMBOLIC_SPARSE, SYMBOLIC_DENSE)

SCOPE_CORPUS = "corpus"
SCOPE_POOL = "pool"

ALL_METHODS = (Method.TOPK_ANN, Method.SEMANTIC_COMPRESSION, Method.GRAPH_PPR)

# раскладка, при которой все кластеры видны под углом < 35° из начала координат
OFFSET_LAYOUT = 15.0


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: SyntheticDatasetSpec = field(default_factory=SyntheticDatasetSpec)
    pool_size: int = 50
    k: int = 10
    lambda_: float = 0.5
    graph_k: int = 5
    symbolic_mode: str = SYMBOLIC_SPARSE
    symbolic_threshold: float = 0.85
    symbolic_m: int = 2
    ppr: PprConfig = field(default_factory=PprConfig)
    beta: float = 1.0
    # первая стадия: по умолчанию L2, как в сценарии с разреженными символическими рёбрами
    ann_metric: str = EUCLIDEAN
    seed_size: int = 5
    graph_scope: str = SCOPE_CORPUS
    query_seed: int | None = None
    query_clusters: tuple[int, ...] | None = None
    rescale_graph: bool = False
    diffusion: str = Diffusion.PPR.value
    methods: tuple[str, ...] = tuple(method.value for method in ALL_METHODS)

    def __post_init__(self):
        if self.pool_size < 1 or self.pool_size > self.dataset.num_points:
            raise ConfigError(
                f"pool_size must lie in [1, {self.dataset.num_points}], got {self.pool_size}"
            )
        if self.k < 1 or self.k > self.pool_size:
            raise ConfigError(f"k must lie in [1, pool_size], got {self.k}")
        if self.symbolic_mode not in SYMBOLIC_MODES:
            raise ConfigError(f"Unknown symbolic mode {self.symbolic_mode!r}")
        if self.graph_scope not in (SCOPE_CORPUS, SCOPE_POOL):
            raise ConfigError(f"Unknown graph scope {self.graph_scope!r}")
        if self.ann_metric not in (COSINE, EUCLIDEAN):
            raise ConfigError(f"Unknown first-stage metric {self.ann_metric!r}")
        object.__setattr__(
            self, "methods", tuple(Method(method).value for method in self.methods)
        )
        if self.query_clusters is not None:
            object.__setattr__(self, "query_clusters", tuple(self.query_clusters))
        # ранние проверки, чтобы CLI падал до генерации данных
        CompressionConfig(k=self.k, lambda_=self.lambda_)
        HybridConfig(beta=self.beta, k=self.k, diffusion=self.diffusion)

    @classmethod
    def sparse_table(cls, seed: int = 42, **overrides) -> "ExperimentConfig":
        """
        Кольцо кластеров вокруг начала координат, L2 первая стадия,
        головы связаны с m соседними головами.
        """
        dataset = SyntheticDatasetSpec(rng_seed=seed)
        return cls(dataset=dataset, **overrides)

    @classmethod
    def dense_table(cls, seed: int = 42, **overrides) -> "ExperimentConfig":
        """
        Кольцо кластеров, сдвинутое от начала координат, косинусная первая
        стадия, плотные символические рёбра по порогу 0.85.
        """
        dataset = SyntheticDatasetSpec(rng_seed=seed, offset=OFFSET_LAYOUT)
        options = dict(ann_metric=COSINE, symbolic_mode=SYMBOLIC_DENSE)
        options.update(overrides)
        return cls(dataset=dataset, **options)

    @classmethod
    def compression_study(cls, seed: int = 42, **overrides) -> "ExperimentConfig":
        """
        Сценарий сравнения top-k и сжатия: top-50 по косинусу, k = 10.
        """
        dataset = SyntheticDatasetSpec(rng_seed=seed, offset=OFFSET_LAYOUT)
        options = dict(
            ann_metric=COSINE,
            symbolic_mode=SYMBOLIC_NONE,
            methods=(Method.TOPK_ANN.value, Method.SEMANTIC_COMPRESSION.value),
        )
        options.update(overrides)
        return cls(dataset=dataset, **options)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return replace(self, dataset=replace(self.dataset, rng_seed=seed), query_seed=None)

    @property
    def effective_query_seed(self) -> int:
        return self.dataset.rng_seed if self.query_seed is None else self.query_seed

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["methods"] = list(self.methods)
        if self.query_clusters is not None:
            data["query_clusters"] = list(self.query_clusters)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        data = dict(data)
        data["dataset"] = SyntheticDatasetSpec(**data["dataset"])
        data["ppr"] = PprConfig(**data["ppr"])
        data["methods"] = tuple(data.get("methods", ()))
        return cls(**data)


@dataclass(frozen=True, eq=False)
class ExperimentArtifacts:
    """
    То, что нужно для рисунка, но не попадает в отчёт.
    """

    dataset: list[EmbeddingVector]
    query: EmbeddingVector
    pool: CandidatePool
    graph: SemanticGraph | None


@dataclass(frozen=True)
class ExperimentReport:
    results: tuple[RetrievalResult, ...]
    config: dict[str, Any]
    runtimes_ms: dict[str, float]
    artifacts: ExperimentArtifacts | None = field(default=None, compare=False, repr=False)

    def result(self, method) -> RetrievalResult:
        method = Method(method)
        for result in self.results:
            if result.method == method:
                return result
        raise KeyError(method.value)


@contextlib.contextmanager
def _stage(name: str, runtimes: dict[str, float]):
    started = time.perf_counter()
    try:
        yield
    except RetrievalError as exc:
        if exc.stage is None:
            exc.stage = name
            if hasattr(exc, "add_note"):
                exc.add_note(f"stage: {name}")
        raise
    finally:
        runtimes[name] = (time.perf_counter() - started) * 1000.0
    logger.debug("stage %s took %.3f ms", name, runtimes[name])


def build_experiment_graph(
    config: ExperimentConfig, nodes: list[EmbeddingVector]
) -> SemanticGraph:
    graph = build_knn_graph(nodes, config.graph_k)
    if config.symbolic_mode == SYMBOLIC_NONE:
        return graph
    heads = elect_cluster_heads(nodes)
    if config.symbolic_mode == SYMBOLIC_SPARSE:
        if len(heads) < 2:
            return graph
        return add_symbolic_edges_sparse(graph, heads, min(config.symbolic_m, len(heads) - 1))
    return add_symbolic_edges_dense(graph, heads, config.symbolic_threshold)


def run_experiment(
    config: ExperimentConfig, dataset: list[EmbeddingVector] | None = None
) -> ExperimentReport:
    """
    1) генерируем корпус (или берём готовый `dataset`) и составной запрос;
    2) первая стадия: пул из pool_size кандидатов;
    3) top-k, жадное сжатие и граф + PPR по запрошенным методам;
    4) метрики релевантности и разнообразия по каждому методу.
    """
    runtimes: dict[str, float] = {}
    methods = [Method(method) for method in config.methods]

    # -- 1. Данные и запрос
    with _stage("generate", runtimes):
        if dataset is None:
            dataset = generate_clusters(config.dataset)
        elif len(dataset) < config.pool_size:
            raise ConfigError(
                f"pool_size {config.pool_size} exceeds the dataset size {len(dataset)}"
            )
    with _stage("query", runtimes):
        query = composite_query(
            dataset, config.effective_query_seed, clusters=config.query_clusters
        )
    vectors = {vector.id: vector for vector in dataset}

    # -- 2. Пул кандидатов
    with _stage("candidates", runtimes):
        pool = build_index(dataset, config.ann_metric).top_n(query, config.pool_size)
    sims = dict(zip(pool.ids, pool.query_sims))

    results = []
    # -- 3. Методы
    if Method.TOPK_ANN in methods:
        with _stage("topk", runtimes):
            chosen = select_topk(pool, config.k)
            scored = [ScoredItem(item_id, float(sims[item_id])) for item_id in chosen]
            results.append(build_result(Method.TOPK_ANN, scored, vectors, query))

    if Method.SEMANTIC_COMPRESSION in methods:
        with _stage("compression", runtimes):
            trace = greedy_select(pool, CompressionConfig(k=config.k, lambda_=config.lambda_))
            scored = [
                ScoredItem(item_id, gain)
                for item_id, gain in zip(trace.chosen, trace.marginal_gains)
            ]
            results.append(
                build_result(Method.SEMANTIC_COMPRESSION, scored, vectors, query)
            )

    graph = None
    if Method.GRAPH_PPR in methods or Method.HYBRID in methods:
        with _stage("graph", runtimes):
            nodes = list(pool.candidates) if config.graph_scope == SCOPE_POOL else dataset
            graph = build_experiment_graph(config, nodes)
            seed = seed_from_pool(pool, graph.ids, config.seed_size)
        # graph_ppr всегда чистый PPR (β = 1), hybrid берёт β из конфигурации
        graph_methods = [
            (Method.GRAPH_PPR, "ppr", 1.0),
            (Method.HYBRID, "hybrid", config.beta),
        ]
        for method, stage, beta in graph_methods:
            if method not in methods:
                continue
            with _stage(stage, runtimes):
                hybrid = HybridConfig(
                    beta=beta,
                    k=config.k,
                    rescale_graph=config.rescale_graph,
                    diffusion=config.diffusion,
                    walk_seed=config.dataset.rng_seed,
                )
                results.append(
                    rank_hybrid(pool, graph, seed, config.ppr, hybrid, method=method)
                )

    for result in results:
        logger.info(
            "%s: relevance=%.4f diversity=%.4f",
            result.method.value,
            result.relevance,
            result.diversity,
        )
    return ExperimentReport(
        results=tuple(results),
        config=config.to_dict(),
        runtimes_ms=runtimes,
        artifacts=ExperimentArtifacts(dataset=dataset, query=query, pool=pool, graph=graph),
    )


@dataclass(frozen=True)
class SweepRow:
    lambda_: float
    relevance: float
    diversity: float
    coverage: float


def lambda_sweep_rows(
    config: ExperimentConfig, seed: int, lambdas: tuple[float, ...]
) -> list[dict[str, float]]:
    """
    Один seed развёртки по λ: одна и та же пара (корпус, пул), меняется только λ.
    `coverage` это покрытие, делённое на размер пула.
    """
    config = config.with_seed(seed)
    dataset = generate_clusters(config.dataset)
    query = composite_query(dataset, seed, clusters=config.query_clusters)
    pool = build_index(dataset, config.ann_metric).top_n(query, config.pool_size)
    vectors = {vector.id: vector for vector in dataset}

    rows = []
    for lambda_ in lambdas:
        trace = greedy_select(pool, CompressionConfig(k=config.k, lambda_=float(lambda_)))
        picked = [vectors[item_id] for item_id in trace.chosen]
        rows.append(
            {
                "seed": seed,
                "lambda": float(lambda_),
                "relevance": relevance_metric(picked, query),
                "diversity": diversity_metric(picked) if len(picked) > 1 else 0.0,
                "coverage": coverage_term(pool, trace.chosen) / len(pool),
            }
        )
    return rows


def average_sweep(rows: list[dict[str, float]], lambdas) -> list[SweepRow]:
    averaged = []
    for lambda_ in lambdas:
        matching = [row for row in rows if row["lambda"] == float(lambda_)]
        if not matching:
            raise ConfigError(f"No sweep rows for lambda={lambda_}")
        averaged.append(
            SweepRow(
                lambda_=float(lambda_),
                relevance=sum(row["relevance"] for row in matching) / len(matching),
                diversity=sum(row["diversity"] for row in matching) / len(matching),
                coverage=sum(row["coverage"] for row in matching) / len(matching),
            )
        )
    return averaged


@dataclass(frozen=True)
class SweepReport:
    rows: tuple[SweepRow, ...]
    per_seed: tuple[dict[str, float], ...]
    config: dict[str, Any]
    seeds: tuple[int, ...]

    def series(self, metric: str) -> list[float]:
        return [getattr(row, metric) for row in self.rows]
