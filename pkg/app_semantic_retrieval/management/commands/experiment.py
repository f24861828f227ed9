from app_semantic_retrieval.experiments import run_experiment
from app_semantic_retrieval.export import export_report
from app_semantic_retrieval.models import save_report
from app_semantic_retrieval.plotting import emit_plot

from ._base import SemanticCommand


class Command(SemanticCommand):
    help = (
        "Эксперимент на синтетических кластерах: Top-k ANN, семантическое сжатие "
        "и граф + PPR с метриками релевантности и разнообразия"
    )

    def add_arguments(self, parser):
        self.add_dataset_arguments(parser)
        self.add_retrieval_arguments(parser)
        parser.add_argument("--format", choices=["csv", "json", "xlsx"], default="csv")
        parser.add_argument("--out", metavar="PATH")
        parser.add_argument("--plot", metavar="PATH", help="SVG-рисунок, только для d = 2")
        parser.add_argument(
            "--save", action="store_true", help="Сохранить запуск в БД (видно в админке)"
        )

    def run(self, **options):
        dataset = self.load_dataset(options)
        config = self.experiment_config(options, dataset=dataset)
        report = run_experiment(config, dataset=dataset)

        self.stdout.write(f"{'method':<22}{'relevance':>11}{'diversity':>11}")
        for result in report.results:
            self.stdout.write(
                f"{result.method.value:<22}{result.relevance:>11.4f}{result.diversity:>11.4f}"
            )

        if options["out"]:
            export_report(report, options["format"], options["out"])
        if options["plot"]:
            artifacts = report.artifacts
            emit_plot(
                report.results,
                artifacts.dataset,
                artifacts.graph,
                options["plot"],
                query=artifacts.query,
            )
        if options["save"]:
            run = save_report(report)
            self.stdout.write(self.style.SUCCESS(f"Saved as run #{run.pk}"))
