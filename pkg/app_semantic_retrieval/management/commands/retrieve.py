from app_semantic_retrieval.experiments import run_experiment
from app_semantic_retrieval.export import export_report
from app_semantic_retrieval.hybrid import Method

from ._base import SemanticCommand


class Command(SemanticCommand):
    help = "Поиск по датасету выбранными методами: top-k, сжатие, граф + PPR, гибрид"

    def add_arguments(self, parser):
        self.add_dataset_arguments(parser)
        self.add_retrieval_arguments(parser)
        parser.add_argument(
            "--method",
            dest="methods",
            action="append",
            choices=[method.value for method in Method],
            help="Можно указать несколько раз; по умолчанию hybrid",
        )
        parser.add_argument("--format", choices=["csv", "json", "xlsx"], default="csv")
        parser.add_argument("--out", metavar="PATH")

    def run(self, **options):
        dataset = self.load_dataset(options)
        methods = options["methods"] or [Method.HYBRID.value]
        config = self.experiment_config(options, dataset=dataset, methods=methods)
        report = run_experiment(config, dataset=dataset)

        for result in report.results:
            self.stdout.write(f"{result.method.value}")
            for rank, item in enumerate(result.items, start=1):
                self.stdout.write(f"  {rank}\t{item.id}\t{item.score:.6f}")
        if options["out"]:
            export_report(report, options["format"], options["out"])
