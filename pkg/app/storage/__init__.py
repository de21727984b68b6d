"""Basaa Toolkit Storage"""

from .artifacts import atomic_write_json, atomic_write_text, read_json

__all__ = ["atomic_write_json", "atomic_write_text", "read_json"]
