"""Vocabulary, word embeddings and skip-gram pretraining."""

from .embeddings import (
    EmbeddedSentence,
    EmbeddingMatrix,
    embed,
    embed_sentence,
    load_embeddings,
    save_embeddings,
)
from .skipgram import train_embeddings
from .vocabulary import UNKNOWN, Vocabulary, build_vocabulary, tokenize

__all__ = [
    "UNKNOWN",
    "EmbeddedSentence",
    "EmbeddingMatrix",
    "Vocabulary",
    "build_vocabulary",
    "embed",
    "embed_sentence",
    "load_embeddings",
    "save_embeddings",
    "tokenize",
    "train_embeddings",
]
