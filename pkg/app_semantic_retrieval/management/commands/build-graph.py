"""
Псевдоним build_graph: `manage.py build-graph ...`.
"""

from .build_graph import Command  # noqa: F401
