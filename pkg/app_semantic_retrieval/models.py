from django.db import models


class ExperimentRun(models.Model):
    """
    Один запуск эксперимента: конфигурация целиком в JSON и время стадий.
    """

    symbolic_mode = models.CharField(
        max_length=16,
        verbose_name="Символические рёбра",
        help_text="""
            none / sparse / dense: как головы кластеров связаны с остальным графом.
        """,
    )
    dataset_seed = models.IntegerField(verbose_name="Seed датасета")
    config = models.JSONField(
        verbose_name="Конфигурация",
        help_text="""
            Полная конфигурация запуска, из неё эксперимент воспроизводится побайтно.
        """,
    )
    runtimes_ms = models.JSONField(default=dict, verbose_name="Время стадий, мс")
    created_at = models.DateTimeField(auto_now_add=True, verbose_name="Дата запуска")

    class Meta:
        verbose_name = "Запуск эксперимента"
        verbose_name_plural = "Запуски экспериментов"
        ordering = ["-created_at", "-id"]

    def __str__(self):
        return f"Запуск #{self.pk} ({self.symbolic_mode}, seed={self.dataset_seed})"


class MethodResult(models.Model):
    run = models.ForeignKey(
        ExperimentRun, on_delete=models.CASCADE, related_name="results"
    )
    method = models.CharField(max_length=32, verbose_name="Метод")
    relevance = models.FloatField(verbose_name="Релевантность")
    diversity = models.FloatField(verbose_name="Разнообразие")
    items = models.JSONField(
        default=list,
        verbose_name="Найденные элементы",
        help_text="""
            Список пар [id, score] в порядке выдачи.
        """,
    )

    class Meta:
        verbose_name = "Результат метода"
        verbose_name_plural = "Результаты методов"
        ordering = ["run", "id"]

    def __str__(self):
        return f"{self.method}: {self.relevance:.4f} / {self.diversity:.4f}"

    @property
    def item_ids(self) -> list[str]:
        return [item_id for item_id, _ in self.items]


def save_report(report) -> ExperimentRun:
    """
    Сохраняет ExperimentReport в БД одним запуском и его результатами.
    """
    run = ExperimentRun.objects.create(
        symbolic_mode=report.config.get("symbolic_mode", ""),
        dataset_seed=report.config["dataset"]["rng_seed"],
        config=report.config,
        runtimes_ms=report.runtimes_ms,
    )
    MethodResult.objects.bulk_create(
        [
            MethodResult(
                run=run,
                method=result.method.value,
                relevance=result.relevance,
                diversity=result.diversity,
                items=[[item.id, item.score] for item in result.items],
            )
            for result in report.results
        ]
    )
    return run
