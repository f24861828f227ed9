"""
SVG-рисунок эксперимента: точки корпуса, запрос, найденные элементы по
каждому методу, kNN-рёбра серым и символические рёбра красным пунктиром.
"""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Sequence

from matplotlib import rc_context
from matplotlib.collections import LineCollection
from matplotlib.figure import Figure

from .exceptions import ExportError, PlotError
from .geometry import EmbeddingVector
from .graph import EdgeKind, SemanticGraph
from .hybrid import Method, RetrievalResult

logger = logging.getLogger(__name__)

# фиксированная соль: id элементов в SVG одинаковые от запуска к запуску
SVG_RC = {"svg.hashsalt": "semantic-retrieval", "svg.fonttype": "none"}

METHOD_STYLE = {
    Method.TOPK_ANN: {"marker": "o", "color": "tab:blue", "label": "Top-k ANN"},
    Method.SEMANTIC_COMPRESSION: {
        "marker": "s",
        "color": "tab:green",
        "label": "Semantic compression",
    },
    Method.GRAPH_PPR: {"marker": "^", "color": "tab:purple", "label": "Graph + PPR"},
    Method.HYBRID: {"marker": "D", "color": "tab:orange", "label": "Hybrid"},
}


def _segments(graph: SemanticGraph, kind: EdgeKind):
    segments = []
    for edge in graph.edges_of_kind(kind):
        source, target = graph.node(edge.source), graph.node(edge.target)
        segments.append([tuple(source.values), tuple(target.values)])
    return segments


def _draw_edges(ax, graph: SemanticGraph):
    knn = _segments(graph, EdgeKind.KNN)
    if knn:
        lines = LineCollection(knn, colors="lightgray", linewidths=0.5, zorder=1)
        lines.set_gid("knn-edges")
        ax.add_collection(lines)
    symbolic = _segments(graph, EdgeKind.SYMBOLIC)
    if symbolic:
        lines = LineCollection(
            symbolic, colors="red", linestyles="dashed", linewidths=0.8, zorder=2
        )
        lines.set_gid("symbolic-edges")
        ax.add_collection(lines)


def emit_plot(
    results: Sequence[RetrievalResult],
    dataset: Sequence[EmbeddingVector],
    graph: SemanticGraph | None,
    path,
    query: EmbeddingVector | None = None,
) -> Path:
    """
    Рисует 2D-датасет и результаты методов в SVG. Для d != 2 проекции нет,
    поэтому PlotError. Вывод побайтно детерминирован для одинаковых входов.
    """
    if not dataset:
        raise PlotError("Nothing to plot: the dataset is empty")
    dims = {vector.dim for vector in dataset}
    if dims != {2}:
        raise PlotError(
            f"Plots need 2-D embeddings, got dim={sorted(dims)}; "
            "generate the dataset with --dim 2"
        )
    positions = {vector.id: vector.values for vector in dataset}

    with rc_context(SVG_RC):
        fig = Figure(figsize=(7, 7))
        ax = fig.add_subplot()

        if graph is not None:
            _draw_edges(ax, graph)

        points = ax.scatter(
            [vector.values[0] for vector in dataset],
            [vector.values[1] for vector in dataset],
            c=[vector.label if vector.label is not None else 0 for vector in dataset],
            cmap="tab10",
            s=12,
            alpha=0.6,
            zorder=3,
            label="Corpus",
        )
        points.set_gid("corpus")

        if graph is not None and graph.cluster_heads:
            heads = ax.scatter(
                [positions[head][0] for head in graph.cluster_heads],
                [positions[head][1] for head in graph.cluster_heads],
                marker="*",
                color="black",
                s=140,
                zorder=5,
                label="Cluster heads",
            )
            heads.set_gid("cluster-heads")

        for result in results:
            style = METHOD_STYLE[result.method]
            picked = [positions[item_id] for item_id in result.ids if item_id in positions]
            markers = ax.scatter(
                [value[0] for value in picked],
                [value[1] for value in picked],
                marker=style["marker"],
                facecolors="none",
                edgecolors=style["color"],
                s=70,
                linewidths=1.4,
                zorder=4,
                label=style["label"],
            )
            markers.set_gid(f"method-{result.method.value}")

        if query is not None:
            ax.scatter(
                [query.values[0]],
                [query.values[1]],
                marker="*",
                facecolors="gold",
                edgecolors="black",
                s=260,
                zorder=6,
                label="Query",
            ).set_gid("query")

        ax.autoscale_view()
        ax.set_aspect("equal", adjustable="datalim")
        ax.legend(loc="best", fontsize="small")

        buffer = io.StringIO()
        fig.savefig(buffer, format="svg", metadata={"Date": None})

    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buffer.getvalue(), encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"Cannot write {path}: {exc}", path=path) from exc
    logger.info("Plot written to %s", path)
    return path
