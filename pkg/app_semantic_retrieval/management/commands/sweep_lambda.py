from app_semantic_retrieval.exceptions import ConfigError
from app_semantic_retrieval.experiments import ExperimentConfig
from app_semantic_retrieval.export import export_sweep
from app_semantic_retrieval.tasks import sweep_lambda

from ._base import SemanticCommand, comma_list, defaults


class Command(SemanticCommand):
    help = (
        "Развёртка по λ: релевантность, разнообразие и покрытие жадного сжатия, "
        "усреднённые по нескольким seed'ам"
    )

    def add_arguments(self, parser):
        conf = defaults()
        parser.add_argument(
            "--lambdas",
            type=comma_list(float),
            default=list(conf["sweep_lambdas"]),
            help="Сетка λ через запятую",
        )
        parser.add_argument("--seeds", type=int, default=conf["sweep_seeds"])
        parser.add_argument("--seed", type=int, default=0, help="Первый seed")
        parser.add_argument("--k", type=int, default=conf["k"])
        parser.add_argument("--pool-size", type=int, default=conf["pool_size"])
        parser.add_argument("--out", metavar="PATH", help="CSV со средними по λ")

    def run(self, **options):
        config = ExperimentConfig.compression_study(
            k=options["k"], pool_size=options["pool_size"]
        )
        lambdas = options["lambdas"]
        if not lambdas:
            raise ConfigError("The lambda grid is empty")
        if options["seeds"] < 1:
            raise ConfigError("--seeds must be positive")

        seeds = range(options["seed"], options["seed"] + options["seeds"])
        report = sweep_lambda(config, lambdas, seeds)

        self.stdout.write(
            f"{'lambda':>8}{'relevance':>11}{'diversity':>11}{'coverage':>11}"
        )
        for row in report.rows:
            self.stdout.write(
                f"{row.lambda_:>8g}{row.relevance:>11.4f}"
                f"{row.diversity:>11.4f}{row.coverage:>11.4f}"
            )
        if options["out"]:
            export_sweep(list(report.rows), options["out"])
