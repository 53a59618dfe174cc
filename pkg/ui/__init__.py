# file: ui/__init__.py
"""
UI package - Contains user interface modules
"""

from .cli import CLI

__all__ = ['CLI']