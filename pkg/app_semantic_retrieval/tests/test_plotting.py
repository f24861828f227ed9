import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

from django.test import SimpleTestCase

from app_semantic_retrieval.exceptions import ExportError, PlotError
from app_semantic_retrieval.geometry import EmbeddingVector
from app_semantic_retrieval.graph import (
    EdgeKind,
    add_symbolic_edges_sparse,
    build_knn_graph,
    elect_cluster_heads,
)
from app_semantic_retrieval.hybrid import Method, RetrievalResult, ScoredItem
from app_semantic_retrieval.plotting import emit_plot
from app_semantic_retrieval.synthetic import SyntheticDatasetSpec, generate_clusters

SVG = "{http://www.w3.org/2000/svg}"


def group(root, gid):
    for element in root.iter(f"{SVG}g"):
        if element.get("id") == gid:
            return element
    return None


def drawn(element):
    # маркеры scatter идут через <use>, линии коллекций отдельными <path>
    return len(element.findall(f".//{SVG}use")) or len(element.findall(f".//{SVG}path"))


class EmitPlotTests(SimpleTestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)

        self.points = generate_clusters(
            SyntheticDatasetSpec(num_points=30, num_clusters=3, rng_seed=5)
        )
        graph = build_knn_graph(self.points, 3)
        self.graph = add_symbolic_edges_sparse(graph, elect_cluster_heads(self.points), 1)
        self.result = RetrievalResult(
            method=Method.SEMANTIC_COMPRESSION,
            items=tuple(ScoredItem(point.id, 1.0) for point in self.points[:6]),
            relevance=0.9,
            diversity=0.1,
        )
        self.query = EmbeddingVector(id="query", values=[0.5, 0.5])

    def plot(self, name, graph=None, results=None):
        path = emit_plot(
            results if results is not None else [self.result],
            self.points,
            graph,
            self.tmp / name,
            query=self.query,
        )
        return path, ET.parse(path).getroot()

    def test_groups_match_the_graph(self):
        _, root = self.plot("graph.svg", graph=self.graph)
        self.assertEqual(
            drawn(group(root, "knn-edges")), len(self.graph.edges_of_kind(EdgeKind.KNN))
        )
        self.assertEqual(
            drawn(group(root, "symbolic-edges")),
            len(self.graph.edges_of_kind(EdgeKind.SYMBOLIC)),
        )
        self.assertEqual(drawn(group(root, "corpus")), 30)
        self.assertEqual(drawn(group(root, "cluster-heads")), 3)
        self.assertEqual(drawn(group(root, "method-semantic_compression")), 6)
        self.assertIsNotNone(group(root, "query"))

    def test_without_graph(self):
        path, root = self.plot("plain.svg")
        self.assertIsNone(group(root, "knn-edges"))
        self.assertIsNone(group(root, "symbolic-edges"))
        self.assertIn('id="legend_1"', path.read_text(encoding="utf-8"))

    def test_bytes_are_stable(self):
        first, _ = self.plot("a.svg", graph=self.graph)
        second, _ = self.plot("b.svg", graph=self.graph)
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_needs_two_dimensions(self):
        points = generate_clusters(SyntheticDatasetSpec(num_points=10, dim=3, rng_seed=1))
        with self.assertRaises(PlotError):
            emit_plot([], points, None, self.tmp / "3d.svg")
        with self.assertRaises(PlotError):
            emit_plot([], [], None, self.tmp / "empty.svg")

    def test_unwritable_path(self):
        blocker = self.tmp / "blocker"
        blocker.write_text("", encoding="utf-8")
        with self.assertRaises(ExportError):
            emit_plot([self.result], self.points, None, blocker / "plot.svg")
