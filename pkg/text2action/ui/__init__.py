"""UI module for Text2Action."""

from .cli import main

__all__ = ["main"]
