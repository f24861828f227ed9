from app_semantic_retrieval.experiments import build_experiment_graph
from app_semantic_retrieval.files import write_graph
from app_semantic_retrieval.graph import EdgeKind
from app_semantic_retrieval.synthetic import generate_clusters

from ._base import SemanticCommand


class Command(SemanticCommand):
    help = "Строит kNN-граф с символическими рёбрами и пишет файл графа"

    def add_arguments(self, parser):
        self.add_dataset_arguments(parser)
        self.add_retrieval_arguments(parser)
        parser.add_argument("--out", required=True, metavar="PATH")

    def run(self, **options):
        dataset = self.load_dataset(options)
        # пул кандидатов здесь не строится, его размер только подгоняем под корпус
        size = len(dataset) if dataset is not None else options["num_points"]
        options["pool_size"] = min(options["pool_size"], size)
        options["k"] = min(options["k"], options["pool_size"])
        config = self.experiment_config(options, dataset=dataset)
        if dataset is None:
            dataset = generate_clusters(config.dataset)

        graph = build_experiment_graph(config, dataset)
        write_graph(options["out"], graph)
        self.stdout.write(
            self.style.SUCCESS(
                f"{len(graph.nodes)} nodes, "
                f"{len(graph.edges_of_kind(EdgeKind.KNN))} knn edges, "
                f"{len(graph.edges_of_kind(EdgeKind.SYMBOLIC))} symbolic edges "
                f"-> {options['out']}"
            )
        )
