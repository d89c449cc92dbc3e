"""Parser and geometric model for SfM reconstruction output.

Consumes the upstream toolchain's ``reconstruction.json``: a top-level
array of reconstructions, each holding ``cameras``, ``shots`` (axis-angle
``rotation`` mapping world to camera, ``translation`` in the camera frame)
and ``points`` (``coordinates`` plus ``color``).  The camera position in
world coordinates is -R^T t; camera axes are x-right, y-down, z-forward.
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidRotation, NoReconstruction, ParseError, SchemaError

logger = logging.getLogger(__name__)

PLY_PROPERTIES = ["x", "y", "z"]
SHOT_MARKER_COLOR = (0, 255, 0)

_SHOT_FIELDS = {"rotation", "translation", "camera"}
_POINT_FIELDS = {"coordinates", "color"}
_RECONSTRUCTION_FIELDS = {"cameras", "shots", "points"}


@dataclass(frozen=True)
class Shot:
    """One localized image: id, world-to-camera axis-angle, translation."""

    id: str
    rotation: tuple
    translation: tuple
    camera: str


@dataclass(frozen=True)
class SparsePoint:
    position: tuple
    color: tuple


@dataclass
class Reconstruction:
    cameras: dict
    shots: dict
    points: list
    unknown_field_count: int = field(default=0, compare=False)
    siblings: list = field(default_factory=list, compare=False)
    dropped_shots: list = field(default_factory=list, compare=False)


def axis_angle_to_matrix(r):
    """Rodrigues' formula; angles below 1e-12 return the identity."""
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise InvalidRotation(f"axis-angle vector must be 3 finite values, got {r!r}")
    theta = float(np.linalg.norm(r))
    if theta < 1e-12:
        return np.eye(3)
    axis = r / theta
    kx, ky, kz = axis
    skew = np.array([[0.0, -kz, ky], [kz, 0.0, -kx], [-ky, kx, 0.0]])
    c, s = math.cos(theta), math.sin(theta)
    return c * np.eye(3) + s * skew + (1.0 - c) * np.outer(axis, axis)


def matrix_to_axis_angle(matrix):
    """Inverse of axis_angle_to_matrix (log map), robust near 0 and pi."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.shape != (3, 3) or not np.all(np.isfinite(m)):
        raise InvalidRotation(f"rotation matrix must be 3x3 finite, got shape {m.shape}")
    cos_theta = min(1.0, max(-1.0, (np.trace(m) - 1.0) / 2.0))
    theta = math.acos(cos_theta)
    if theta < 1e-12:
        return np.zeros(3)
    if theta < math.pi - 1e-6:
        axis = np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])
        return axis * (theta / (2.0 * math.sin(theta)))
    # Near pi the skew part vanishes; recover the axis from the symmetric part.
    sym = (m + np.eye(3)) / 2.0
    axis = np.sqrt(np.maximum(np.diag(sym), 0.0))
    k = int(np.argmax(axis))
    if axis[k] > 0.0:
        for i in range(3):
            if i != k and sym[k, i] < 0.0:
                axis[i] = -axis[i]
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise InvalidRotation("cannot recover rotation axis")
    return axis / norm * theta


def shot_position(shot):
    """World position of a shot's camera center: -R^T t."""
    rotation = axis_angle_to_matrix(shot.rotation)
    # + 0.0 folds any -0.0 produced by the negation into plain 0.0 so
    # serialized coordinates never carry a sign on zero.
    return -(rotation.T @ np.asarray(shot.translation, dtype=np.float64)) + 0.0


def _finite_triple(value, path):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise SchemaError(path, "expected 3 numbers")
    triple = tuple(float(x) for x in value)
    if not all(math.isfinite(x) for x in triple):
        raise SchemaError(path, "non-finite value")
    return triple


def _color_triple(value, path, lenient):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 3
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise SchemaError(path, "expected 3 color channels")
    if not all(math.isfinite(float(x)) for x in value):
        raise SchemaError(path, "non-finite color channel")
    channels = tuple(int(round(float(x))) for x in value)
    if any(c < 0 or c > 255 for c in channels):
        if not lenient:
            raise SchemaError(path, f"color channel outside [0, 255]: {channels}")
        channels = tuple(min(255, max(0, c)) for c in channels)
    return channels


def parse_reconstruction(text, lenient=False):
    """Parse a reconstruction document.

    Returns the first reconstruction in the array; any further ones are
    recorded on ``siblings`` as (index, shot_count) for operator review.
    Unknown fields are ignored but counted.  With lenient=True, invalid
    shots are dropped (and listed on ``dropped_shots``) instead of failing.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON at offset {exc.pos}: {exc.msg}", offset=exc.pos) from exc
    if not isinstance(doc, list):
        raise SchemaError("$", "expected a top-level array of reconstructions")
    if not doc:
        raise NoReconstruction("document holds no reconstructions")
    first = doc[0]
    if not isinstance(first, dict):
        raise SchemaError("[0]", "reconstruction must be an object")

    if "cameras" not in first:
        raise SchemaError("cameras", "missing")
    if "shots" not in first:
        raise SchemaError("shots", "missing")
    cameras = first["cameras"]
    raw_shots = first["shots"]
    raw_points = first.get("points", {})
    if not isinstance(cameras, dict):
        raise SchemaError("cameras", "expected an object")
    if not isinstance(raw_shots, dict):
        raise SchemaError("shots", "expected an object")
    if not isinstance(raw_points, (dict, list)):
        raise SchemaError("points", "expected an object or array")

    unknown = sum(1 for key in first if key not in _RECONSTRUCTION_FIELDS)
    shots = {}
    dropped = []
    for shot_id, raw in raw_shots.items():
        path = f"shots/{shot_id}"
        try:
            if not isinstance(raw, dict):
                raise SchemaError(path, "expected an object")
            rotation = _finite_triple(raw.get("rotation"), f"{path}/rotation")
            translation = _finite_triple(raw.get("translation"), f"{path}/translation")
            camera = raw.get("camera")
            if not isinstance(camera, str) or camera not in cameras:
                raise SchemaError(f"{path}/camera", f"unknown camera reference {camera!r}")
        except SchemaError:
            if not lenient:
                raise
            dropped.append(shot_id)
            continue
        unknown += sum(1 for key in raw if key not in _SHOT_FIELDS)
        shots[shot_id] = Shot(id=shot_id, rotation=rotation, translation=translation, camera=camera)

    points = []
    point_items = raw_points.items() if isinstance(raw_points, dict) else enumerate(raw_points)
    for point_id, raw in point_items:
        path = f"points/{point_id}"
        if not isinstance(raw, dict):
            raise SchemaError(path, "expected an object")
        position = _finite_triple(raw.get("coordinates"), f"{path}/coordinates")
        color = _color_triple(raw.get("color"), f"{path}/color", lenient)
        unknown += sum(1 for key in raw if key not in _POINT_FIELDS)
        points.append(SparsePoint(position=position, color=color))

    siblings = []
    for index, other in enumerate(doc[1:], start=1):
        count = len(other.get("shots", {})) if isinstance(other, dict) else 0
        siblings.append((index, count))
    if siblings:
        logger.warning(
            "document holds %d reconstruction(s) beyond the first (shot counts: %s); using the first only",
            len(siblings), [c for _, c in siblings],
        )
    if dropped:
        logger.warning("lenient parse dropped %d invalid shot(s): %s", len(dropped), dropped)

    return Reconstruction(
        cameras=cameras,
        shots=shots,
        points=points,
        unknown_field_count=unknown,
        siblings=siblings,
        dropped_shots=dropped,
    )


def serialize_reconstruction(rec):
    """Re-emit a parsed model as a reconstruction document (known fields
    only; points as an array so their order survives a reparse)."""
    doc = [{
        "cameras": rec.cameras,
        "shots": {
            shot.id: {
                "rotation": list(shot.rotation),
                "translation": list(shot.translation),
                "camera": shot.camera,
            }
            for shot in rec.shots.values()
        },
        "points": [
            {"coordinates": list(p.position), "color": list(p.color)} for p in rec.points
        ],
    }]
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def export_ply(rec, include_shots=False):
    """ASCII PLY document of the sparse points; with include_shots, camera
    positions are appended as pure-green vertices."""
    vertices = [(p.position, p.color) for p in rec.points]
    if include_shots:
        for shot_id in sorted(rec.shots, key=str):
            pos = shot_position(rec.shots[shot_id])
            vertices.append(((float(pos[0]), float(pos[1]), float(pos[2])), SHOT_MARKER_COLOR))
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(vertices)}",
    ]
    lines += [f"property float {axis}" for axis in PLY_PROPERTIES]
    lines += ["property uchar red", "property uchar green", "property uchar blue", "end_header"]
    for (x, y, z), (r, g, b) in vertices:
        lines.append(f"{x!r} {y!r} {z!r} {r} {g} {b}")
    return "\n".join(lines) + "\n"
