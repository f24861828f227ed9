"""
Семантическое сжатие: целевая функция "покрытие + λ·разнообразие" и жадный
выбор k элементов из пула кандидатов.

    f(S) = Σ_{v∈pool} max_{s∈S} sim(v, s) + λ · Σ_{u≠v∈S} (1 − sim(u, v))

Сумма разнообразия берётся по упорядоченным парам (каждая пара дважды).
"""

from __future__ import annotations

import logging
import math
import numbers
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .candidates import CandidatePool
from .exceptions import ConfigError, UnknownItemError
from .geometry import TIE_TOLERANCE, id_ranks

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompressionConfig:
    k: int
    lambda_: float = 0.0

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, numbers.Integral) or self.k < 1:
            raise ConfigError(f"k must be a positive integer, got {self.k!r}")
        if not math.isfinite(self.lambda_) or self.lambda_ < 0:
            raise ConfigError(f"lambda must be finite and >= 0, got {self.lambda_!r}")


@dataclass(frozen=True)
class SelectionTrace:
    chosen: tuple[str, ...]
    marginal_gains: tuple[float, ...]
    objective_value: float


def _positions(pool: CandidatePool, selected: Iterable[str]) -> np.ndarray:
    positions = []
    for item_id in dict.fromkeys(selected):
        try:
            positions.append(pool.position(item_id))
        except KeyError:
            raise UnknownItemError(f"Item {item_id!r} is not in the pool") from None
    return np.array(positions, dtype=np.int64)


def coverage_term(pool: CandidatePool, selected: Iterable[str]) -> float:
    positions = _positions(pool, selected)
    if positions.size == 0:
        raise ConfigError("Coverage of an empty selection is undefined")
    sims = pool.pairwise.entries
    return float(sims[:, positions].max(axis=1).sum())


def diversity_term(pool: CandidatePool, selected: Iterable[str]) -> float:
    positions = _positions(pool, selected)
    if positions.size < 2:
        return 0.0
    block = 1.0 - pool.pairwise.entries[np.ix_(positions, positions)]
    return float(block.sum() - np.trace(block))


def objective(
    pool: CandidatePool, selected: Iterable[str], config: CompressionConfig
) -> float:
    selected = list(selected)
    value = coverage_term(pool, selected)
    if config.lambda_:
        value += config.lambda_ * diversity_term(pool, selected)
    return value


def select_topk(pool: CandidatePool, k: int) -> list[str]:
    """
    Первые k элементов пула: пул уже отсортирован первой стадией.
    """
    if k < 1 or k > len(pool):
        raise ConfigError(f"Cannot select {k} items from a pool of {len(pool)}")
    return list(pool.ids[:k])


def _greedy(pool: CandidatePool, k: int, lambda_: float) -> SelectionTrace:
    n = len(pool)
    if k > n:
        raise ConfigError(f"Cannot select {k} items from a pool of {n}")

    sims = pool.pairwise.entries
    ranks = id_ranks(pool.ids)
    taken = np.zeros(n, dtype=bool)
    # текущее покрытие каждого кандидата и Σ (1 − sim) до выбранных
    cover = None
    spread = np.zeros(n)

    chosen, gains = [], []
    for _ in range(k):
        if cover is None:
            # первый шаг: f({v}) напрямую, f(∅) не определена
            step = sims.sum(axis=0)
        else:
            step = np.maximum(sims, cover[:, None]).sum(axis=0) - cover.sum()
        if lambda_:
            step = step + 2.0 * lambda_ * spread
        step[taken] = -np.inf

        best = step.max()
        tied = np.flatnonzero(step >= best - TIE_TOLERANCE)
        pick = int(tied[np.argmin(ranks[tied])])

        taken[pick] = True
        chosen.append(pool.ids[pick])
        gains.append(float(step[pick]))
        column = sims[:, pick]
        cover = column.copy() if cover is None else np.maximum(cover, column)
        spread += 1.0 - column

    value = coverage_term(pool, chosen)
    if lambda_:
        value += lambda_ * diversity_term(pool, chosen)
    return SelectionTrace(
        chosen=tuple(chosen), marginal_gains=tuple(gains), objective_value=value
    )


def greedy_coverage_select(pool: CandidatePool, k: int) -> SelectionTrace:
    """
    Жадный выбор только по покрытию (facility location), без подмены на top-k.
    """
    return _greedy(pool, k, 0.0)


def greedy_select(pool: CandidatePool, config: CompressionConfig) -> SelectionTrace:
    """
    Жадный выбор по f(S). При λ = 0 возвращается top-k по близости к запросу:
    чистое покрытие выбирало бы медоиды пула, а не ближайших к запросу.
    """
    if config.k > len(pool):
        raise ConfigError(f"Cannot select {config.k} items from a pool of {len(pool)}")
    if config.lambda_ == 0:
        chosen = select_topk(pool, config.k)
        gains, previous = [], 0.0
        for size in range(1, len(chosen) + 1):
            current = coverage_term(pool, chosen[:size])
            gains.append(current - previous)
            previous = current
        return SelectionTrace(
            chosen=tuple(chosen), marginal_gains=tuple(gains), objective_value=previous
        )

    trace = _greedy(pool, config.k, config.lambda_)
    logger.debug(
        "greedy_select k=%d lambda=%.3f objective=%.6f",
        config.k,
        config.lambda_,
        trace.objective_value,
    )
    return trace
