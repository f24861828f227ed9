# Celery-приложение загружается вместе с Django, чтобы shared_task из
# app_semantic_retrieval.tasks привязывались к нему.
from .celery import app as celery_app

__all__ = ("celery_app",)
