from app_semantic_retrieval.candidates import build_index
from app_semantic_retrieval.compression import CompressionConfig, greedy_select
from app_semantic_retrieval.synthetic import composite_query, generate_clusters

from ._base import SemanticCommand, comma_list, defaults


class Command(SemanticCommand):
    help = (
        "Семантическое сжатие: жадный выбор k элементов из пула первой стадии "
        "по покрытию + λ·разнообразию"
    )

    def add_arguments(self, parser):
        conf = defaults()
        self.add_dataset_arguments(parser)
        parser.add_argument("--k", type=int, default=conf["k"])
        parser.add_argument("--pool-size", type=int, default=conf["pool_size"])
        parser.add_argument(
            "--lambda", dest="lambda_", type=float, default=conf["lambda"]
        )
        parser.add_argument(
            "--ann-metric", choices=["cosine", "euclidean"], default="cosine"
        )
        parser.add_argument("--query-clusters", type=comma_list(int), default=None)

    def run(self, **options):
        config = CompressionConfig(k=options["k"], lambda_=options["lambda_"])
        dataset = self.load_dataset(options)
        if dataset is None:
            dataset = generate_clusters(self.dataset_spec(options))

        query = composite_query(dataset, options["seed"], clusters=options["query_clusters"])
        pool = build_index(dataset, options["ann_metric"]).top_n(query, options["pool_size"])
        trace = greedy_select(pool, config)

        for rank, (item_id, gain) in enumerate(
            zip(trace.chosen, trace.marginal_gains), start=1
        ):
            self.stdout.write(f"{rank}\t{item_id}\t{gain:.6f}")
        self.stdout.write(f"objective\t{trace.objective_value:.6f}")
