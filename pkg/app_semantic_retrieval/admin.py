import openpyxl
from openpyxl.utils import get_column_letter

from django.contrib import admin
from django.http import HttpResponse

from .models import ExperimentRun, MethodResult


class MethodResultInline(admin.TabularInline):
    model = MethodResult
    readonly_fields = ("method", "relevance", "diversity", "items")
    extra = 0


@admin.register(ExperimentRun)
class ExperimentRunAdmin(admin.ModelAdmin):
    list_display = [
        "id",
        "symbolic_mode",
        "dataset_seed",
        "created_at",
    ]
    list_filter = [
        "symbolic_mode",
    ]
    readonly_fields = [
        "symbolic_mode",
        "dataset_seed",
        "config",
        "runtimes_ms",
        "created_at",
    ]
    inlines = [MethodResultInline]
    actions = ["export_selected_to_excel"]

    def export_selected_to_excel(self, request, queryset):
        """
        Одна строка на пару (запуск, метод): в том же виде, что таблицы отчёта.
        """
        wb = openpyxl.Workbook()
        ws = wb.active
        ws.title = "Experiment runs"

        headers = [
            "Запуск",
            "Символические рёбра",
            "Seed датасета",
            "Метод",
            "Релевантность",
            "Разнообразие",
            "Элементы",
        ]
        ws.append(headers)

        runs = queryset.prefetch_related("results")
        for run in runs:
            for result in run.results.all():
                ws.append(
                    [
                        run.pk,
                        run.symbolic_mode,
                        run.dataset_seed,
                        result.method,
                        round(result.relevance, 4),
                        round(result.diversity, 4),
                        " ".join(result.item_ids),
                    ]
                )

        for i, column in enumerate(headers, 1):
            column_letter = get_column_letter(i)
            ws.column_dimensions[column_letter].width = max(len(column) + 2, 15)

        response = HttpResponse(
            content_type="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"
        )
        response["Content-Disposition"] = "attachment; filename=experiment_runs.xlsx"
        wb.save(response)
        return response

    export_selected_to_excel.short_description = (
        "Экспортировать выбранные запуски в Excel"
    )
