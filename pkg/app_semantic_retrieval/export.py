"""
Выгрузка отчётов эксперимента: csv, json (без потерь) и xlsx.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import openpyxl
from openpyxl.utils import get_column_letter

from .exceptions import ConfigError, ExportError
from .experiments import ExperimentReport, SweepRow
from .hybrid import Method, RetrievalResult, ScoredItem

logger = logging.getLogger(__name__)

CSV = "csv"
JSON = "json"
XLSX = "xlsx"
FORMATS = (CSV, JSON, XLSX)

CSV_HEADER = ["method", "relevance", "diversity", "items"]


def _csv_rows(report: ExperimentReport) -> list[list[str]]:
    return [
        [
            result.method.value,
            f"{result.relevance:.4f}",
            f"{result.diversity:.4f}",
            " ".join(result.ids),
        ]
        for result in report.results
    ]


def report_to_dict(report: ExperimentReport) -> dict:
    return {
        "config": report.config,
        "runtimes_ms": report.runtimes_ms,
        "results": [
            {
                "method": result.method.value,
                "relevance": result.relevance,
                "diversity": result.diversity,
                "items": [{"id": item.id, "score": item.score} for item in result.items],
            }
            for result in report.results
        ],
    }


def _write_csv(report: ExperimentReport, path: Path) -> None:
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(_csv_rows(report))


def _write_json(report: ExperimentReport, path: Path) -> None:
    with path.open("w", encoding="utf-8") as handle:
        json.dump(report_to_dict(report), handle, ensure_ascii=False, indent=2)
        handle.write("\n")


def _write_xlsx(report: ExperimentReport, path: Path) -> None:
    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = "Results"
    ws.append(CSV_HEADER)
    for result in report.results:
        ws.append(
            [result.method.value, result.relevance, result.diversity, " ".join(result.ids)]
        )

    # Отдельный лист с конфигурацией и временем стадий
    meta = wb.create_sheet("Runtimes")
    meta.append(["stage", "ms"])
    for stage, elapsed in report.runtimes_ms.items():
        meta.append([stage, elapsed])

    for i, column in enumerate(CSV_HEADER, 1):
        ws.column_dimensions[get_column_letter(i)].width = max(len(column) + 2, 15)
    wb.save(path)


WRITERS = {CSV: _write_csv, JSON: _write_json, XLSX: _write_xlsx}


def export_report(report: ExperimentReport, format: str, path) -> Path:
    """
    Пишет отчёт в файл. Пустой отчёт даёт файл только с заголовком.
    """
    try:
        writer = WRITERS[format]
    except KeyError:
        raise ConfigError(
            f"Unknown export format {format!r}, expected one of {', '.join(FORMATS)}"
        ) from None
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        writer(report, path)
    except OSError as exc:
        raise ExportError(f"Cannot write {path}: {exc}", path=path) from exc
    logger.info("Exported %d results to %s (%s)", len(report.results), path, format)
    return path


def load_report_json(path) -> ExperimentReport:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ExportError(f"Cannot read report {path}: {exc}", path=path) from exc
    results = tuple(
        RetrievalResult(
            method=Method(entry["method"]),
            items=tuple(ScoredItem(item["id"], item["score"]) for item in entry["items"]),
            relevance=entry["relevance"],
            diversity=entry["diversity"],
        )
        for entry in data["results"]
    )
    return ExperimentReport(
        results=results, config=data["config"], runtimes_ms=data["runtimes_ms"]
    )


def export_sweep(rows: list[SweepRow], path) -> Path:
    """
    Развёртка по λ всегда пишется в csv: lambda,relevance,diversity,coverage.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["lambda", "relevance", "diversity", "coverage"])
            for row in rows:
                writer.writerow(
                    [
                        f"{row.lambda_:g}",
                        f"{row.relevance:.4f}",
                        f"{row.diversity:.4f}",
                        f"{row.coverage:.4f}",
                    ]
                )
    except OSError as exc:
        raise ExportError(f"Cannot write {path}: {exc}", path=path) from exc
    return path
