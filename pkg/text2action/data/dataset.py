"""Sentence/action records and their JSON-lines files."""

from __future__ import annotations

import json
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from ..embedding import tokenize
from ..errors import DatasetValidationError, InputError, ParseError
from ..logging import log_event
from .pose import MIN_NORM, POSE_DIM, RawKeypointFrame, build_pose_vector, unit_block_error
from .sequence import DEFAULT_FPS, DEFAULT_LENGTH, ActionSequence, gaussian_smooth, resample

UNIT_TOLERANCE = 1e-9


class _RecordSchema(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    sentence: list[str]
    fps: float
    frames: list[list[float]]


class _ClipFrameSchema(BaseModel):
    t: float
    joints: dict[str, list[float]]


class _ClipSchema(BaseModel):
    id: str
    sentence: str | list[str]
    frames: list[_ClipFrameSchema]


@dataclass(frozen=True)
class DatasetRecord:
    """One (sentence, action) training pair."""

    id: str
    sentence: tuple[str, ...]
    action: ActionSequence

    @property
    def frames(self) -> np.ndarray:
        return self.action.frames

    @property
    def fps(self) -> float:
        return self.action.fps

    @property
    def label(self) -> str:
        """Class label: the id up to its last '-'."""
        return self.id.rsplit("-", 1)[0]

    @property
    def text(self) -> str:
        return " ".join(self.sentence)

    def to_json(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "sentence": list(self.sentence),
            "fps": self.fps,
            "frames": self.frames.tolist(),
        }


def make_record(
    record_id: str, sentence: Sequence[str], frames: np.ndarray, fps: float
) -> DatasetRecord:
    """Build a record, checking every record invariant."""

    def fail(rule: str) -> DatasetValidationError:
        return DatasetValidationError(record_id, rule)

    if not record_id:
        raise fail("id must be non-empty")
    tokens = tuple(sentence)
    if not tokens or any(not token for token in tokens):
        raise fail("sentence must be a non-empty list of non-empty tokens")
    if not fps > 0:
        raise fail(f"fps must be positive, got {fps}")
    frames = np.asarray(frames, dtype=np.float64)
    if frames.ndim != 2 or frames.shape[0] < 1:
        raise fail("frames must be a non-empty list of pose vectors")
    if frames.shape[1] != POSE_DIM:
        raise fail(f"every frame must hold {POSE_DIM} floats, found {frames.shape[1]}")
    if not np.all(np.isfinite(frames)):
        raise fail("frames must be finite")
    if np.any(np.linalg.norm(frames[:, 3:].reshape(-1, 7, 3), axis=-1) < MIN_NORM):
        raise fail("joint vectors must be non-degenerate")
    error = unit_block_error(frames)
    if error > UNIT_TOLERANCE:
        raise fail(f"joint vectors must have unit length (off by {error:.3g})")
    return DatasetRecord(record_id, tokens, ActionSequence(frames, fps))


def record_from_json(values: Any) -> DatasetRecord:
    record_id = str(values.get("id", "<missing id>")) if isinstance(values, dict) else "<no id>"
    try:
        schema = _RecordSchema.model_validate(values)
    except ValidationError as e:
        rule = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise DatasetValidationError(record_id, rule) from e
    frames = schema.frames
    widths = {len(frame) for frame in frames}
    if len(widths) > 1 or (widths and widths != {POSE_DIM}):
        bad = sorted(widths - {POSE_DIM})
        raise DatasetValidationError(
            record_id, f"every frame must hold {POSE_DIM} floats, found {bad[0]}"
        )
    return make_record(schema.id, schema.sentence, np.asarray(frames), schema.fps)


def save_dataset(path: Path, records: Sequence[DatasetRecord]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record.to_json()))
            f.write("\n")
    return path


def _json_lines(path: Path):
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                yield line_number, json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(str(path), line_number, f"invalid JSON: {e.msg}") from e


def load_dataset(path: Path) -> list[DatasetRecord]:
    """Read and validate a JSON-lines dataset; record ids must be unique."""
    path = Path(path)
    records: list[DatasetRecord] = []
    seen: set[str] = set()
    for line_number, values in _json_lines(path):
        if not isinstance(values, dict):
            raise ParseError(str(path), line_number, "each line must be a JSON object")
        record = record_from_json(values)
        if record.id in seen:
            raise DatasetValidationError(record.id, "record ids must be unique")
        seen.add(record.id)
        records.append(record)
    log_event("dataset_loaded", path=str(path), records=len(records))
    return records


def ingest_clips(
    path: Path,
    smoothing_sigma: float = 1.0,
    fps: float = DEFAULT_FPS,
    length: int = DEFAULT_LENGTH,
) -> list[DatasetRecord]:
    """Turn raw keypoint clips into dataset records.

    Each line holds ``{"id", "sentence", "frames": [{"t", "joints": {name: [x, y, z]}}]}``.
    Frames become pose vectors, are smoothed at their native rate and then
    resampled to ``length`` frames at ``fps``.
    """
    path = Path(path)
    records: list[DatasetRecord] = []
    for line_number, values in _json_lines(path):
        try:
            clip = _ClipSchema.model_validate(values)
        except ValidationError as e:
            raise ParseError(str(path), line_number, f"not a keypoint clip: {e}") from e
        sentence = tokenize(clip.sentence) if isinstance(clip.sentence, str) else clip.sentence
        try:
            if len(clip.frames) < 2:
                raise InputError("a clip needs at least two frames")
            raw = [RawKeypointFrame(frame.t, frame.joints) for frame in clip.frames]
            times = [frame.timestamp for frame in raw]
            poses = np.stack([build_pose_vector(frame) for frame in raw])
            span = times[-1] - times[0]
            native_fps = (len(times) - 1) / span if span > 0 else fps
            smoothed = gaussian_smooth(ActionSequence(poses, native_fps), smoothing_sigma)
            action = resample(times, smoothed.frames, fps=fps, length=length)
        except InputError as e:
            raise DatasetValidationError(clip.id, str(e)) from e
        records.append(make_record(clip.id, [t.lower() for t in sentence], action.frames, fps))
    log_event("clips_ingested", path=str(path), records=len(records))
    return records
