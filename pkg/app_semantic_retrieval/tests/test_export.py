import tempfile
from pathlib import Path

import openpyxl
from django.test import SimpleTestCase

from app_semantic_retrieval.exceptions import ConfigError, ExportError
from app_semantic_retrieval.experiments import (
    ExperimentConfig,
    ExperimentReport,
    SweepRow,
    run_experiment,
)
from app_semantic_retrieval.export import (
    export_report,
    export_sweep,
    load_report_json,
)
from app_semantic_retrieval.hybrid import Method, RetrievalResult, ScoredItem


def small_report():
    return ExperimentReport(
        results=(
            RetrievalResult(
                method=Method.TOPK_ANN,
                items=(ScoredItem("p01", 0.99), ScoredItem("p07", 0.5)),
                relevance=0.968812345,
                diversity=0.0671,
            ),
            RetrievalResult(
                method=Method.GRAPH_PPR,
                items=(ScoredItem("p03", 0.2),),
                relevance=0.5,
                diversity=0.0,
            ),
        ),
        config={"k": 2, "methods": ["topk_ann", "graph_ppr"]},
        runtimes_ms={"topk": 0.25, "ppr": 1.5},
    )


class ExportReportTests(SimpleTestCase):
    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.tmp = Path(tmp.name)

    def test_csv_layout(self):
        path = export_report(small_report(), "csv", self.tmp / "report.csv")
        self.assertEqual(
            path.read_text(encoding="utf-8"),
            "method,relevance,diversity,items\n"
            "topk_ann,0.9688,0.0671,p01 p07\n"
            "graph_ppr,0.5000,0.0000,p03\n",
        )

    def test_empty_report_is_header_only(self):
        report = ExperimentReport(results=(), config={}, runtimes_ms={})
        path = export_report(report, "csv", self.tmp / "nested" / "empty.csv")
        self.assertEqual(path.read_text(encoding="utf-8"), "method,relevance,diversity,items\n")

    def test_json_is_lossless(self):
        report = small_report()
        path = export_report(report, "json", self.tmp / "report.json")
        self.assertEqual(load_report_json(path), report)

    def test_json_of_a_real_run(self):
        config = ExperimentConfig(methods=("topk_ann", "semantic_compression"))
        report = run_experiment(config)
        path = export_report(report, "json", self.tmp / "run.json")
        loaded = load_report_json(path)
        self.assertEqual(loaded.results, report.results)
        self.assertEqual(ExperimentConfig.from_dict(loaded.config), config)

    def test_xlsx(self):
        path = export_report(small_report(), "xlsx", self.tmp / "report.xlsx")
        wb = openpyxl.load_workbook(path)
        rows = list(wb["Results"].iter_rows(values_only=True))
        self.assertEqual(rows[0], ("method", "relevance", "diversity", "items"))
        self.assertEqual(rows[1][0], "topk_ann")
        self.assertAlmostEqual(rows[1][1], 0.968812345)
        self.assertEqual(rows[2][3], "p03")
        self.assertEqual(list(wb["Runtimes"].iter_rows(values_only=True))[1], ("topk", 0.25))

    def test_unknown_format(self):
        with self.assertRaises(ConfigError):
            export_report(small_report(), "parquet", self.tmp / "report.parquet")

    def test_unwritable_path(self):
        blocker = self.tmp / "blocker"
        blocker.write_text("not a directory", encoding="utf-8")
        target = blocker / "report.csv"
        with self.assertRaises(ExportError) as cm:
            export_report(small_report(), "csv", target)
        self.assertEqual(cm.exception.path, target)

    def test_load_missing(self):
        with self.assertRaises(ExportError):
            load_report_json(self.tmp / "missing.json")

    def test_sweep_csv(self):
        rows = [SweepRow(0.0, 0.99, 0.001, 0.98), SweepRow(0.25, 0.98, 0.0042, 0.97)]
        path = export_sweep(rows, self.tmp / "sweep.csv")
        self.assertEqual(
            path.read_text(encoding="utf-8").splitlines(),
            [
                "lambda,relevance,diversity,coverage",
                "0,0.9900,0.0010,0.9800",
                "0.25,0.9800,0.0042,0.9700",
            ],
        )
