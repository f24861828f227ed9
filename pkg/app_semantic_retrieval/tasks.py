import logging

from celery import group, shared_task

from .experiments import (
    ExperimentConfig,
    SweepReport,
    average_sweep,
    lambda_sweep_rows,
)

logger = logging.getLogger(__name__)


@shared_task
def run_sweep_seed(config_data: dict, seed: int, lambdas: list[float]) -> list[dict]:
    """
    Один seed развёртки по λ. Аргументы и результат только JSON-типы,
    чтобы задачу можно было отправить настоящему воркеру.
    """
    config = ExperimentConfig.from_dict(config_data)
    return lambda_sweep_rows(config, seed, tuple(lambdas))


def sweep_lambda(config: ExperimentConfig, lambdas, seeds) -> SweepReport:
    """
    1) раздаём seed'ы задачам run_sweep_seed (в eager-режиме всё идёт в процессе);
    2) склеиваем строки строго в порядке seed'ов;
    3) усредняем метрики по каждому λ.
    """
    lambdas = [float(value) for value in lambdas]
    seeds = [int(seed) for seed in seeds]

    # -- 1. Раздаём задачи
    job = group(run_sweep_seed.s(config.to_dict(), seed, lambdas) for seed in seeds)
    per_seed = job.apply_async().get()

    # -- 2. Склеиваем: group сохраняет порядок подзадач
    rows = [row for seed_rows in per_seed for row in seed_rows]

    # -- 3. Усредняем
    logger.info("lambda sweep: %d seeds x %d lambdas", len(seeds), len(lambdas))
    return SweepReport(
        rows=tuple(average_sweep(rows, lambdas)),
        per_seed=tuple(rows),
        config=config.to_dict(),
        seeds=tuple(seeds),
    )
