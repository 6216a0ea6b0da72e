"""Unit tests, one package per text2action subpackage."""
