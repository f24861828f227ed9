from io import BytesIO

import openpyxl
from django.contrib import admin
from django.test import RequestFactory, TestCase

from app_semantic_retrieval.admin import ExperimentRunAdmin
from app_semantic_retrieval.models import ExperimentRun, MethodResult


class ExportToExcelActionTests(TestCase):
    def setUp(self):
        self.run = ExperimentRun.objects.create(
            symbolic_mode="dense", dataset_seed=7, config={"k": 2}, runtimes_ms={}
        )
        MethodResult.objects.create(
            run=self.run,
            method="topk_ann",
            relevance=0.912345,
            diversity=0.05,
            items=[["p01", 0.99], ["p04", 0.9]],
        )
        MethodResult.objects.create(
            run=self.run,
            method="graph_ppr",
            relevance=0.5,
            diversity=0.25,
            items=[["p09", 0.1]],
        )
        # запуск вне выборки в файл не попадает
        ExperimentRun.objects.create(
            symbolic_mode="sparse", dataset_seed=1, config={}, runtimes_ms={}
        )

    def test_exports_one_row_per_method(self):
        model_admin = ExperimentRunAdmin(ExperimentRun, admin.site)
        request = RequestFactory().post("/admin/app_semantic_retrieval/experimentrun/")
        queryset = ExperimentRun.objects.filter(pk=self.run.pk)

        response = model_admin.export_selected_to_excel(request, queryset)

        self.assertEqual(
            response["Content-Type"],
            "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
        )
        self.assertIn("experiment_runs.xlsx", response["Content-Disposition"])
        wb = openpyxl.load_workbook(BytesIO(response.content))
        rows = list(wb["Experiment runs"].iter_rows(values_only=True))
        self.assertEqual(len(rows[0]), 7)
        self.assertEqual(rows[0][3], "Метод")
        self.assertEqual(
            rows[1:],
            [
                (self.run.pk, "dense", 7, "topk_ann", 0.9123, 0.05, "p01 p04"),
                (self.run.pk, "dense", 7, "graph_ppr", 0.5, 0.25, "p09"),
            ],
        )
