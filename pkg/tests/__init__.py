"""Tests for Text2Action."""
