"""Unit tests for text2action.config."""
