"""Street-view-style navigation graph over localized panoramas.

Each panorama node links to its nearest neighbors; every link carries the
yaw/pitch bearing of the target inside the source panorama plus a
distance-coded style (near: large and red, far: small and blue).  Bearings
use the camera convention pinned in :mod:`panotriage.sfm` (x-right,
y-down, z-forward): yaw = atan2(x, z), pitch = -asin(y / norm).
"""

import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateEdge, EmptyModel, RangeError, SchemaError
from .sfm import axis_angle_to_matrix, shot_position

logger = logging.getLogger(__name__)

DEFAULT_MAX_NEIGHBORS = 4
MIN_SIZE_PX = 10
MAX_SIZE_PX = 30
WORLD_UP = np.array([0.0, 0.0, 1.0])
TILT_WARN_DEG = 15.0
# Below this separation two shots are considered coincident: no usable bearing.
COINCIDENT_EPS = 1e-12


@dataclass(frozen=True)
class PanoNode:
    id: str
    image: str
    position: tuple
    rotation: tuple
    missing_image: bool = False


@dataclass(frozen=True)
class Hotspot:
    from_id: str
    to_id: str
    yaw_deg: float
    pitch_deg: float
    distance: float
    color: tuple
    size_px: int


@dataclass
class TourGraph:
    nodes: list
    edges: list
    metadata: dict = field(default_factory=dict)


def normalize_yaw(deg):
    """Wrap an angle in degrees to (-180, 180]."""
    r = math.fmod(deg + 180.0, 360.0)
    if r < 0.0:
        r += 360.0
    r -= 180.0
    return 180.0 if r == -180.0 else r


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def bearing(from_node, to_node):
    """(yaw_deg, pitch_deg) of to_node as seen from from_node's panorama.

    The world displacement is rotated into the source camera frame; at the
    poles (direction parallel to camera y) yaw is defined as 0.
    """
    d_world = np.asarray(to_node.position, dtype=np.float64) - np.asarray(from_node.position, dtype=np.float64)
    norm = float(np.linalg.norm(d_world))
    if norm < COINCIDENT_EPS:
        raise DegenerateEdge(f"nodes {from_node.id!r} and {to_node.id!r} share a position")
    d_cam = axis_angle_to_matrix(from_node.rotation) @ d_world
    x, y, z = (float(v) for v in d_cam)
    planar = math.hypot(x, z)
    yaw = 0.0 if planar < 1e-9 else normalize_yaw(math.degrees(math.atan2(x, z)))
    pitch = math.degrees(-math.asin(min(1.0, max(-1.0, y / norm))))
    return yaw, pitch


def style(distance, d_min, d_max, min_size=MIN_SIZE_PX, max_size=MAX_SIZE_PX):
    """Distance-coded hotspot style within one node's [d_min, d_max] range.

    Nearest maps to pure red at max_size, farthest to pure blue at
    min_size; a zero-width range renders as nearest.
    """
    if d_min > d_max:
        raise RangeError(f"d_min {d_min} exceeds d_max {d_max}")
    if distance < d_min or distance > d_max:
        raise RangeError(f"distance {distance} outside [{d_min}, {d_max}]")
    u = 0.0 if d_max == d_min else (distance - d_min) / (d_max - d_min)
    color = (_round_half_up(255.0 * (1.0 - u)), 0, _round_half_up(255.0 * u))
    size = _round_half_up(max_size - u * (max_size - min_size))
    return color, size


def _warn_tilted(nodes):
    tilted = 0
    for node in nodes:
        up_world = axis_angle_to_matrix(node.rotation).T @ np.array([0.0, -1.0, 0.0])
        cos_tilt = min(1.0, max(-1.0, float(up_world @ WORLD_UP)))
        if math.degrees(math.acos(cos_tilt)) > TILT_WARN_DEG:
            tilted += 1
    if tilted:
        logger.warning(
            "%d of %d panoramas tilt more than %g deg from world up; "
            "hotspot placement follows the shot rotation as-is",
            tilted, len(nodes), TILT_WARN_DEG,
        )


def build_graph(rec, max_neighbors=DEFAULT_MAX_NEIGHBORS, max_distance=None,
                units="reconstruction", image_exists=None,
                min_size=MIN_SIZE_PX, max_size=MAX_SIZE_PX):
    """Build the navigation graph from a parsed reconstruction.

    Every node links to its max_neighbors nearest other nodes (Euclidean,
    world frame) within max_distance, ties broken by ascending shot id.
    Edges are directed and need not be symmetric.  Hotspot color and size
    scale per source node over that node's own edge distances.
    """
    if max_neighbors < 1:
        raise ValueError(f"max_neighbors must be >= 1, got {max_neighbors}")
    if max_distance is not None and max_distance <= 0:
        raise ValueError(f"max_distance must be positive, got {max_distance}")
    if not rec.shots:
        raise EmptyModel("reconstruction has no shots")

    shot_ids = sorted(rec.shots, key=str)
    nodes = []
    for shot_id in shot_ids:
        shot = rec.shots[shot_id]
        pos = shot_position(shot)
        nodes.append(PanoNode(
            id=shot_id,
            image=shot_id,
            position=(float(pos[0]), float(pos[1]), float(pos[2])),
            rotation=tuple(float(v) for v in shot.rotation),
            missing_image=bool(image_exists is not None and not image_exists(shot_id)),
        ))
    _warn_tilted(nodes)

    positions = np.array([n.position for n in nodes])
    edges = []
    coincident = 0
    for i, node in enumerate(nodes):
        dists = np.linalg.norm(positions - positions[i], axis=1)
        candidates = []
        for j, other in enumerate(nodes):
            if j == i:
                continue
            d = float(dists[j])
            if d <= COINCIDENT_EPS:
                coincident += 1
                continue
            if max_distance is not None and d > max_distance:
                continue
            candidates.append((d, other.id, other))
        candidates.sort(key=lambda c: (c[0], c[1]))
        chosen = candidates[:max_neighbors]
        if not chosen:
            continue
        d_min, d_max = chosen[0][0], max(c[0] for c in chosen)
        for d, _, other in chosen:
            yaw, pitch = bearing(node, other)
            color, size = style(d, d_min, d_max, min_size=min_size, max_size=max_size)
            edges.append(Hotspot(
                from_id=node.id, to_id=other.id,
                yaw_deg=yaw, pitch_deg=pitch, distance=d,
                color=color, size_px=size,
            ))
    if coincident:
        logger.warning("skipped %d neighbor pair(s) with coincident positions", coincident)

    metadata = {"max_neighbors": int(max_neighbors), "max_distance": max_distance, "units": units}
    return TourGraph(nodes=nodes, edges=edges, metadata=metadata)


def emit_tour(graph):
    """Serialize a graph to the tour document (stable key order, floats at
    full round-trip precision, deterministic for a fixed graph)."""
    doc = {
        "version": 1,
        "units": graph.metadata.get("units", "reconstruction"),
        "nodes": [],
        "edges": [],
        "generated": {
            "max_neighbors": graph.metadata.get("max_neighbors"),
            "max_distance": graph.metadata.get("max_distance"),
        },
    }
    for node in graph.nodes:
        entry = {"id": node.id, "image": node.image, "position": list(node.position)}
        if node.missing_image:
            entry["missing"] = True
        doc["nodes"].append(entry)
    for edge in graph.edges:
        doc["edges"].append({
            "from": edge.from_id,
            "to": edge.to_id,
            "yaw_deg": edge.yaw_deg,
            "pitch_deg": edge.pitch_deg,
            "distance": edge.distance,
            "color": list(edge.color),
            "size_px": edge.size_px,
        })
    return json.dumps(doc, indent=2) + "\n"


def parse_tour(text):
    """Parse and validate a tour document back into a TourGraph."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"malformed JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("$", "expected a top-level object")
    if doc.get("version") != 1:
        raise SchemaError("version", f"unsupported version {doc.get('version')!r}")
    units = doc.get("units")
    if units not in ("meters", "reconstruction"):
        raise SchemaError("units", f"expected 'meters' or 'reconstruction', got {units!r}")
    if not isinstance(doc.get("nodes"), list) or not isinstance(doc.get("edges"), list):
        raise SchemaError("nodes", "nodes and edges must be arrays")

    nodes = []
    ids = set()
    for i, raw in enumerate(doc["nodes"]):
        path = f"nodes[{i}]"
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str):
            raise SchemaError(path, "node needs a string id")
        pos = raw.get("position")
        if not isinstance(pos, list) or len(pos) != 3:
            raise SchemaError(f"{path}/position", "expected [x, y, z]")
        if not raw.get("image"):
            raise SchemaError(f"{path}/image", "missing image path")
        nodes.append(PanoNode(
            id=raw["id"], image=raw["image"],
            position=tuple(float(v) for v in pos),
            rotation=(0.0, 0.0, 0.0),
            missing_image=bool(raw.get("missing", False)),
        ))
        ids.add(raw["id"])

    edges = []
    for i, raw in enumerate(doc["edges"]):
        path = f"edges[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(path, "expected an object")
        if raw.get("from") not in ids or raw.get("to") not in ids:
            raise SchemaError(path, f"edge endpoint missing from nodes: {raw.get('from')!r} -> {raw.get('to')!r}")
        color = raw.get("color")
        if not isinstance(color, list) or len(color) != 3:
            raise SchemaError(f"{path}/color", "expected [r, g, b]")
        for key in ("yaw_deg", "pitch_deg", "distance", "size_px"):
            if not isinstance(raw.get(key), (int, float)) or isinstance(raw.get(key), bool):
                raise SchemaError(f"{path}/{key}", f"expected a number, got {raw.get(key)!r}")
        edges.append(Hotspot(
            from_id=raw["from"], to_id=raw["to"],
            yaw_deg=float(raw["yaw_deg"]), pitch_deg=float(raw["pitch_deg"]),
            distance=float(raw["distance"]),
            color=tuple(int(c) for c in color),
            size_px=int(raw["size_px"]),
        ))

    generated = doc.get("generated", {})
    metadata = {
        "max_neighbors": generated.get("max_neighbors"),
        "max_distance": generated.get("max_distance"),
        "units": units,
    }
    return TourGraph(nodes=nodes, edges=edges, metadata=metadata)
