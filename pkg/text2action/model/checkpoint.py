"""Named-tensor checkpoint container.

Layout (all integers little-endian)::

    magic      8 bytes   b"T2ATENS\\0"
    version    uint32    FORMAT_VERSION
    header_len uint32
    header     UTF-8 JSON: {"tensors": [{"name", "shape", "offset"}], "metadata": {...}}
    data       float64 row-major values; offsets are relative to the start of data
"""

from __future__ import annotations

import json
import math
import struct
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import CheckpointError
from ..tensor import Tensor

MAGIC = b"T2ATENS\0"
FORMAT_VERSION = 1
_PREAMBLE = struct.Struct("<II")


@dataclass
class Checkpoint:
    tensors: dict[str, np.ndarray]
    metadata: dict[str, Any] = field(default_factory=dict)

    def group(self, prefix: str) -> dict[str, Tensor]:
        """Tensors stored under ``prefix/``, keyed by their short names."""
        marker = f"{prefix}/"
        found = {
            name[len(marker) :]: Tensor(values)
            for name, values in self.tensors.items()
            if name.startswith(marker)
        }
        if not found:
            raise CheckpointError(f"checkpoint has no tensors in group '{prefix}'")
        return found

    def array(self, name: str) -> np.ndarray:
        try:
            return self.tensors[name]
        except KeyError:
            raise CheckpointError(f"checkpoint is missing tensor '{name}'") from None


def flatten_groups(
    groups: Mapping[str, Mapping[str, Tensor | np.ndarray]],
) -> dict[str, np.ndarray]:
    """``{"generator": {"W_x": ...}}`` -> ``{"generator/W_x": ...}``."""
    flat: dict[str, np.ndarray] = {}
    for prefix, tensors in groups.items():
        for name, value in tensors.items():
            array = value.values if isinstance(value, Tensor) else np.asarray(value)
            flat[f"{prefix}/{name}"] = array
    return flat


def save_checkpoint(
    path: Path, tensors: Mapping[str, np.ndarray], metadata: Mapping[str, Any] | None = None
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    entries = []
    chunks = []
    offset = 0
    for name in sorted(tensors):
        original = np.asarray(tensors[name], dtype="<f8")
        # ascontiguousarray promotes 0-d arrays to (1,)
        array = np.ascontiguousarray(original).reshape(original.shape)
        entries.append({"name": name, "shape": list(array.shape), "offset": offset})
        raw = array.tobytes(order="C")
        chunks.append(raw)
        offset += len(raw)
    header = json.dumps(
        {"tensors": entries, "metadata": dict(metadata or {})}, sort_keys=True
    ).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(_PREAMBLE.pack(FORMAT_VERSION, len(header)))
        f.write(header)
        for raw in chunks:
            f.write(raw)
    return path


def load_checkpoint(path: Path) -> Checkpoint:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}") from e

    start = len(MAGIC) + _PREAMBLE.size
    if len(blob) < start or blob[: len(MAGIC)] != MAGIC:
        raise CheckpointError(f"{path} is not a text2action checkpoint (bad magic)")
    version, header_len = _PREAMBLE.unpack_from(blob, len(MAGIC))
    if version != FORMAT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported checkpoint version {version} (expected {FORMAT_VERSION})"
        )
    try:
        header = json.loads(blob[start : start + header_len].decode("utf-8"))
        entries = header["tensors"]
        metadata = header.get("metadata", {})
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError) as e:
        raise CheckpointError(f"{path}: corrupt checkpoint header: {e}") from e

    data = memoryview(blob)[start + header_len :]
    tensors: dict[str, np.ndarray] = {}
    for entry in entries:
        name, shape, offset = entry["name"], tuple(entry["shape"]), int(entry["offset"])
        count = math.prod(shape)
        if offset < 0 or offset + 8 * count > len(data):
            raise CheckpointError(f"{path}: tensor '{name}' runs past the end of the file")
        values = np.frombuffer(data, dtype="<f8", count=count, offset=offset)
        tensors[name] = values.astype(np.float64).reshape(shape)
    return Checkpoint(tensors, metadata)
