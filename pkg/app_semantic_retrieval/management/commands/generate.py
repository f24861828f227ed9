from app_semantic_retrieval.files import write_dataset
from app_semantic_retrieval.synthetic import generate_clusters

from ._base import SemanticCommand


class Command(SemanticCommand):
    help = "Генерирует синтетические гауссовы кластеры и пишет файл датасета"

    def add_arguments(self, parser):
        self.add_dataset_arguments(parser)
        parser.add_argument("--out", required=True, metavar="PATH")

    def run(self, **options):
        spec = self.dataset_spec(options)
        points = generate_clusters(spec)
        write_dataset(options["out"], points)
        self.stdout.write(
            self.style.SUCCESS(
                f"{len(points)} points in {spec.num_clusters} clusters -> {options['out']}"
            )
        )
