from app_semantic_retrieval.files import read_graph
from app_semantic_retrieval.graph import (
    PprConfig,
    SeedVector,
    normalize_adjacency,
    personalized_pagerank,
)

from ._base import SemanticCommand, comma_list, defaults


class Command(SemanticCommand):
    help = "Personalized PageRank по файлу графа из заданных seed-узлов"

    def add_arguments(self, parser):
        conf = defaults()
        parser.add_argument("--graph", required=True, metavar="PATH")
        parser.add_argument(
            "--seed-nodes",
            type=comma_list(str),
            required=True,
            help="id через запятую, веса seed делятся поровну",
        )
        parser.add_argument("--alpha", type=float, default=conf["alpha"])
        parser.add_argument("--tol", type=float, default=conf["tolerance"])
        parser.add_argument("--max-iter", type=int, default=conf["max_iterations"])
        parser.add_argument(
            "--top", type=int, default=None, help="Показать только N лучших узлов"
        )
        parser.add_argument("--out", metavar="PATH")

    def run(self, **options):
        config = PprConfig(
            alpha=options["alpha"],
            tolerance=options["tol"],
            max_iterations=options["max_iter"],
        )
        graph = read_graph(options["graph"])
        adj = normalize_adjacency(graph)
        seed = SeedVector.uniform(adj.order, options["seed_nodes"])
        scores = personalized_pagerank(adj, seed, config)

        ranked = sorted(scores, key=lambda pair: (-pair[1], pair[0]))
        if options["top"] is not None:
            ranked = ranked[: options["top"]]
        lines = [f"{item_id}\t{score:.10f}" for item_id, score in ranked]

        if options["out"]:
            with open(options["out"], "w", encoding="utf-8", newline="\n") as handle:
                handle.write("\n".join(lines) + "\n")
        for line in lines:
            self.stdout.write(line)
