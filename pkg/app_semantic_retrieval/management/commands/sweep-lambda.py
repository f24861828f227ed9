"""
Псевдоним sweep_lambda: `manage.py sweep-lambda ...`.
"""

from .sweep_lambda import Command  # noqa: F401
