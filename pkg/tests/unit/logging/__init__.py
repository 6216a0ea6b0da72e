"""Unit tests for text2action.logging."""
