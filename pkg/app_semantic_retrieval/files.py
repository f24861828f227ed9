"""
Текстовые форматы датасета и графа (UTF-8, LF).

Датасет:  `#nodes <N> #dim <d>`, затем `id<TAB>label<TAB>c1,c2,...,cd`.
Граф:     тот же заголовок, строки векторов `id<TAB>c1,...,cd`, затем рёбра
          `source<TAB>target<TAB>weight<TAB>kind`. Головы кластеров, если есть,
          пишутся служебной строкой `#heads id1,id2,...`.
"""

from __future__ import annotations

import logging
import math
import re
from pathlib import Path
from typing import Sequence

from .exceptions import DatasetError, DuplicateItemError, RetrievalError
from .geometry import EmbeddingVector, ensure_unique_ids
from .graph import Edge, EdgeKind, SemanticGraph

logger = logging.getLogger(__name__)

HEADER_RE = re.compile(r"^#nodes (\d+) #dim (\d+)$")


def _number(value: float) -> str:
    # repr-точность: запись и чтение дают те же самые float
    return format(float(value), ".17g")


def _coords(vector: EmbeddingVector) -> str:
    return ",".join(_number(value) for value in vector.values)


def _parse_coords(text: str, line_no: int, dim: int) -> list[float]:
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError:
        raise DatasetError(f"Line {line_no}: bad coordinates {text!r}") from None
    if not all(math.isfinite(value) for value in values):
        raise DatasetError(f"Line {line_no}: non-finite coordinates {text!r}")
    if len(values) != dim:
        raise DatasetError(f"Line {line_no}: expected {dim} coordinates, got {len(values)}")
    return values


def _read_header(lines: list[str], path) -> tuple[int, int]:
    if not lines:
        raise DatasetError(f"{path}: file is empty")
    match = HEADER_RE.match(lines[0])
    if not match:
        raise DatasetError(f"{path}: expected header '#nodes <N> #dim <d>'")
    return int(match.group(1)), int(match.group(2))


def _read_lines(path) -> list[str]:
    try:
        return Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DatasetError(f"Cannot read {path}: {exc}") from exc


def _write_lines(path, lines: list[str]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise DatasetError(f"Cannot write {path}: {exc}") from exc
    logger.info("Wrote %s", path)


def write_dataset(path, vectors: Sequence[EmbeddingVector]) -> None:
    dim = vectors[0].dim if vectors else 0
    lines = [f"#nodes {len(vectors)} #dim {dim}"]
    for vector in vectors:
        label = "" if vector.label is None else str(vector.label)
        lines.append(f"{vector.id}\t{label}\t{_coords(vector)}")
    _write_lines(path, lines)


def read_dataset(path) -> list[EmbeddingVector]:
    lines = _read_lines(path)
    count, dim = _read_header(lines, path)
    vectors = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise DatasetError(f"{path}:{line_no}: expected id, label and coordinates")
        item_id, label, coords = parts
        try:
            label = int(label) if label else None
        except ValueError:
            raise DatasetError(f"{path}:{line_no}: bad cluster label {label!r}") from None
        vectors.append(
            EmbeddingVector(
                id=item_id, values=_parse_coords(coords, line_no, dim), label=label
            )
        )
    if len(vectors) != count:
        raise DatasetError(f"{path}: header says {count} rows, found {len(vectors)}")
    try:
        ensure_unique_ids(vectors)
    except DuplicateItemError as exc:
        raise DatasetError(f"{path}: {exc}") from exc
    return vectors


def write_graph(path, graph: SemanticGraph) -> None:
    dim = graph.nodes[0].dim if graph.nodes else 0
    lines = [f"#nodes {len(graph.nodes)} #dim {dim}"]
    if graph.cluster_heads:
        lines.append("#heads " + ",".join(graph.cluster_heads))
    lines.extend(f"{node.id}\t{_coords(node)}" for node in graph.nodes)
    lines.extend(
        f"{edge.source}\t{edge.target}\t{_number(edge.weight)}\t{edge.kind.value}"
        for edge in graph.edges
    )
    _write_lines(path, lines)


def read_graph(path, labels: dict[str, int] | None = None) -> SemanticGraph:
    """
    Метки кластеров в файле графа не хранятся; их можно подать из датасета.
    """
    lines = _read_lines(path)
    count, dim = _read_header(lines, path)
    labels = labels or {}
    nodes, edges, heads = [], [], None
    for line_no, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        if line.startswith("#heads "):
            heads = tuple(filter(None, line[len("#heads ") :].split(",")))
            continue
        if line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) == 2:
            item_id, coords = parts
            nodes.append(
                EmbeddingVector(
                    id=item_id,
                    values=_parse_coords(coords, line_no, dim),
                    label=labels.get(item_id),
                )
            )
        elif len(parts) == 4:
            source, target, weight, kind = parts
            try:
                edges.append(Edge(source, target, float(weight), EdgeKind(kind)))
            except ValueError:
                raise DatasetError(f"{path}:{line_no}: bad edge {line!r}") from None
        else:
            raise DatasetError(f"{path}:{line_no}: unexpected row {line!r}")
    if len(nodes) != count:
        raise DatasetError(f"{path}: header says {count} nodes, found {len(nodes)}")
    try:
        return SemanticGraph(nodes=tuple(nodes), edges=tuple(edges), cluster_heads=heads)
    except RetrievalError as exc:
        raise DatasetError(f"{path}: {exc}") from exc
