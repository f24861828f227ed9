#!/usr/bin/env python
"""
Точка входа проекта.

    python manage.py experiment --preset dense --plot out/run.svg
    python manage.py sweep_lambda --seeds 20 --out out/sweep.csv
    python manage.py test app_semantic_retrieval
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Django is not installed; run `poetry install` or "
            "`pip install -r requirements.txt` first"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
