"""Text2Action - sentence-to-motion generation with a sequence-to-sequence GAN."""

__version__ = "1.0.0"

# Main entry point
from .ui import main

__all__ = ["main"]
