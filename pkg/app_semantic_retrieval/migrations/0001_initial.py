# Generated by Django 5.1.5 on 2026-10-16 10:12

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="ExperimentRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "symbolic_mode",
                    models.CharField(
                        help_text="\n            none / sparse / dense: как головы кластеров связаны с остальным графом.\n        ",
                        max_length=16,
                        verbose_name="Символические рёбра",
                    ),
                ),
                ("dataset_seed", models.IntegerField(verbose_name="Seed датасета")),
                (
                    "config",
                    models.JSONField(
                        help_text="\n            Полная конфигурация запуска, из неё эксперимент воспроизводится побайтно.\n        ",
                        verbose_name="Конфигурация",
                    ),
                ),
                (
                    "runtimes_ms",
                    models.JSONField(default=dict, verbose_name="Время стадий, мс"),
                ),
                (
                    "created_at",
                    models.DateTimeField(auto_now_add=True, verbose_name="Дата запуска"),
                ),
            ],
            options={
                "verbose_name": "Запуск эксперимента",
                "verbose_name_plural": "Запуски экспериментов",
                "ordering": ["-created_at", "-id"],
            },
        ),
        migrations.CreateModel(
            name="MethodResult",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("method", models.CharField(max_length=32, verbose_name="Метод")),
                ("relevance", models.FloatField(verbose_name="Релевантность")),
                ("diversity", models.FloatField(verbose_name="Разнообразие")),
                (
                    "items",
                    models.JSONField(
                        default=list,
                        help_text="\n            Список пар [id, score] в порядке выдачи.\n        ",
                        verbose_name="Найденные элементы",
                    ),
                ),
                (
                    "run",
                    models.ForeignKey(
                        on_delete=django.db.models.deletion.CASCADE,
                        related_name="results",
                        to="app_semantic_retrieval.experimentrun",
                    ),
                ),
            ],
            options={
                "verbose_name": "Результат метода",
                "verbose_name_plural": "Результаты методов",
                "ordering": ["run", "id"],
            },
        ),
    ]
