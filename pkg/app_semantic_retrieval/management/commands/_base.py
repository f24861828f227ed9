"""
Общая часть команд manage.py: коды выхода и повторяющиеся опции.

Коды выхода: 0 успех, 1 ошибка использования/конфигурации,
2 ошибка выполнения (данные, сходимость, ввод-вывод).
"""

import logging

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from app_semantic_retrieval.exceptions import ConfigError, RetrievalError
from app_semantic_retrieval.experiments import (
    ExperimentConfig,
    SCOPE_CORPUS,
    SCOPE_POOL,
    SYMBOLIC_MODES,
)
from app_semantic_retrieval.files import read_dataset
from app_semantic_retrieval.graph import PprConfig
from app_semantic_retrieval.synthetic import RANDOM, RING, SyntheticDatasetSpec

logger = logging.getLogger(__name__)

USAGE_ERROR = 1
RUNTIME_ERROR = 2


def defaults():
    return settings.SEMANTIC_RETRIEVAL


def comma_list(cast):
    def parse(text):
        return [cast(part) for part in text.split(",") if part.strip()]

    return parse


class SemanticCommand(BaseCommand):
    """
    Наследники реализуют `run(**options)` вместо `handle`.
    """

    _options_parsed = False

    def run_from_argv(self, argv):
        try:
            super().run_from_argv(argv)
        except SystemExit as exc:
            # argparse выходит с 2 ещё до execute(); для нас это ошибка использования
            if exc.code == 2 and not self._options_parsed:
                raise SystemExit(USAGE_ERROR) from exc
            raise

    def execute(self, *args, **options):
        self._options_parsed = True
        return super().execute(*args, **options)

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except ConfigError as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc
        except RetrievalError as exc:
            stage = f" at stage {exc.stage!r}" if exc.stage else ""
            logger.debug("command failed", exc_info=True)
            raise CommandError(
                f"{type(exc).__name__}{stage}: {exc}", returncode=RUNTIME_ERROR
            ) from exc
        except OSError as exc:
            raise CommandError(str(exc), returncode=RUNTIME_ERROR) from exc

    def run(self, **options):
        raise NotImplementedError

    # -- опции

    def add_dataset_arguments(self, parser):
        conf = defaults()
        group = parser.add_argument_group("dataset")
        group.add_argument(
            "--dataset",
            metavar="PATH",
            help="Файл датасета; без него генерируются синтетические кластеры",
        )
        group.add_argument("--num-points", type=int, default=200)
        group.add_argument("--dim", type=int, default=2)
        group.add_argument("--clusters", type=int, default=5)
        group.add_argument("--cluster-std", type=float, default=conf["cluster_std"])
        group.add_argument("--separation", type=float, default=conf["separation"])
        group.add_argument("--layout", choices=[RING, RANDOM], default=RING)
        group.add_argument("--offset", type=float, default=None)
        group.add_argument("--seed", type=int, default=conf["seed"])

    def add_retrieval_arguments(self, parser):
        conf = defaults()
        parser.add_argument("--k", type=int, default=conf["k"])
        parser.add_argument("--pool-size", type=int, default=conf["pool_size"])
        parser.add_argument(
            "--lambda", dest="lambda_", type=float, default=conf["lambda"]
        )
        parser.add_argument("--beta", type=float, default=conf["beta"])
        parser.add_argument("--alpha", type=float, default=conf["alpha"])
        parser.add_argument("--tol", type=float, default=conf["tolerance"])
        parser.add_argument("--max-iter", type=int, default=conf["max_iterations"])
        parser.add_argument("--graph-k", type=int, default=conf["graph_k"])
        parser.add_argument("--symbolic-mode", choices=SYMBOLIC_MODES, default=None)
        parser.add_argument(
            "--threshold", type=float, default=conf["symbolic_threshold"]
        )
        parser.add_argument("--symbolic-m", type=int, default=conf["symbolic_m"])
        parser.add_argument("--seed-size", type=int, default=conf["seed_size"])
        parser.add_argument(
            "--ann-metric", choices=["cosine", "euclidean"], default=None
        )
        parser.add_argument(
            "--graph-scope", choices=[SCOPE_CORPUS, SCOPE_POOL], default=SCOPE_CORPUS
        )
        parser.add_argument("--rescale-graph", action="store_true")
        parser.add_argument("--diffusion", choices=["ppr", "walks"], default="ppr")
        parser.add_argument(
            "--query-clusters",
            type=comma_list(int),
            default=None,
            help="Запрос по подмножеству кластеров, например 0 или 0,2",
        )
        parser.add_argument(
            "--preset",
            choices=["sparse", "dense", "compression"],
            default="sparse",
            help="Базовая раскладка данных и метрика первой стадии",
        )

    # -- сборка конфигураций из опций

    def dataset_spec(self, options, base: SyntheticDatasetSpec | None = None):
        base = base or SyntheticDatasetSpec()
        return SyntheticDatasetSpec(
            num_points=options["num_points"],
            dim=options["dim"],
            num_clusters=options["clusters"],
            cluster_std=options["cluster_std"],
            separation=options["separation"],
            rng_seed=options["seed"],
            layout=options["layout"],
            offset=base.offset if options["offset"] is None else options["offset"],
        )

    def load_dataset(self, options):
        """
        Датасет из файла или None, если его нужно сгенерировать.
        """
        if not options.get("dataset"):
            return None
        return read_dataset(options["dataset"])

    def experiment_config(self, options, dataset=None, methods=None) -> ExperimentConfig:
        presets = {
            "sparse": ExperimentConfig.sparse_table,
            "dense": ExperimentConfig.dense_table,
            "compression": ExperimentConfig.compression_study,
        }
        preset = presets[options["preset"]](seed=options["seed"])

        if dataset is None:
            spec = self.dataset_spec(options, base=preset.dataset)
        else:
            # файл задаёт корпус сам, спецификация нужна только для проверок
            labels = {vector.label for vector in dataset if vector.label is not None}
            spec = SyntheticDatasetSpec(
                num_points=len(dataset),
                dim=dataset[0].dim,
                num_clusters=max(1, min(len(labels), len(dataset))),
                rng_seed=options["seed"],
                layout=RANDOM,
            )

        changes = dict(
            dataset=spec,
            pool_size=options["pool_size"],
            k=options["k"],
            lambda_=options["lambda_"],
            graph_k=options["graph_k"],
            symbolic_threshold=options["threshold"],
            symbolic_m=options["symbolic_m"],
            ppr=PprConfig(
                alpha=options["alpha"],
                tolerance=options["tol"],
                max_iterations=options["max_iter"],
            ),
            beta=options["beta"],
            seed_size=options["seed_size"],
            graph_scope=options["graph_scope"],
            rescale_graph=options["rescale_graph"],
            diffusion=options["diffusion"],
            query_clusters=options["query_clusters"],
            methods=methods or preset.methods,
        )
        if options["symbolic_mode"] is not None:
            changes["symbolic_mode"] = options["symbolic_mode"]
        else:
            changes["symbolic_mode"] = preset.symbolic_mode
        changes["ann_metric"] = options["ann_metric"] or preset.ann_metric
        return ExperimentConfig(**changes)
