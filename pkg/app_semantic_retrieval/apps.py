from django.apps import AppConfig


class AppSemanticRetrievalConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "app_semantic_retrieval"
    verbose_name = "Семантическое сжатие и графовый поиск"
