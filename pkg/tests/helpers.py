"""Shared test utilities: independent oracles and fixture builders.

Everything here is deliberately written from the definitions, not by
calling the package, so tests compare two independent derivations.
"""

import json
import math

import numpy as np
from PIL import Image


def textured(height=64, width=96, seed=11):
    """Deterministic textured grayscale raster in [0, 255]: low-frequency
    gradients plus seeded noise, so the Laplacian variance is non-trivial."""
    rng = np.random.RandomState(seed)
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    img = (
        96.0
        + 60.0 * np.sin(2.0 * np.pi * x / 17.0)
        + 40.0 * np.cos(2.0 * np.pi * y / 11.0)
        + 30.0 * rng.rand(height, width)
    )
    return np.clip(img, 0.0, 255.0)


def save_gray_png(path, img):
    Image.fromarray(np.asarray(img, dtype=np.float64).round().astype(np.uint8), mode="L").save(path)


def brute_thresholds(variances, k):
    """Brute-force window-mean oracle: mean over existing indices only."""
    n = len(variances)
    out = []
    js = []
    for i in range(n):
        window = [variances[j] for j in range(i - k, i + k + 1) if 0 <= j < n]
        out.append(sum(window) / len(window))
        js.append((2 * k + 1) - len(window))
    return out, js


def yaw_delta(a, b):
    """Smallest angular difference in degrees; wrap-safe around +-180."""
    d = math.fmod(a - b, 360.0)
    if d > 180.0:
        d -= 360.0
    if d < -180.0:
        d += 360.0
    return abs(d)


def rot_x(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rotation_oracle(rotvec):
    """Axis-angle to matrix via composed elementary rotations only: align
    the axis with z, rotate about z, undo the alignment."""
    rotvec = np.asarray(rotvec, dtype=np.float64)
    theta = float(np.linalg.norm(rotvec))
    if theta == 0.0:
        return np.eye(3)
    kx, ky, kz = rotvec / theta
    phi = math.atan2(ky, kx)
    psi = math.acos(max(-1.0, min(1.0, kz)))
    align = rot_z(phi) @ rot_y(psi)
    return align @ rot_z(theta) @ align.T


def random_rotvec(rng, max_angle=math.pi * 0.999):
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    return axis * rng.uniform(0.0, max_angle)


LEVEL_FACING_X = (
    2.0 * math.pi / 3.0 / math.sqrt(3.0),
    -2.0 * math.pi / 3.0 / math.sqrt(3.0),
    2.0 * math.pi / 3.0 / math.sqrt(3.0),
)
"""World-to-camera axis-angle for a level camera facing world +x with
world +z up: camera x = -world y, camera y = -world z, camera z = world x."""


def make_reconstruction(shots, points=(), cameras=None):
    """JSON text for a reconstruction document.

    shots: iterable of (id, rotation, translation); points: iterable of
    (coordinates, color).
    """
    cameras = cameras or {"cam0": {"projection_type": "spherical", "width": 64, "height": 32}}
    camera_id = next(iter(cameras))
    doc = [{
        "cameras": cameras,
        "shots": {
            shot_id: {"rotation": list(rot), "translation": list(t), "camera": camera_id}
            for shot_id, rot, t in shots
        },
        "points": {
            str(i): {"coordinates": list(pos), "color": list(color)}
            for i, (pos, color) in enumerate(points)
        },
    }]
    return json.dumps(doc)


def parse_ply(text):
    """Minimal independent ASCII PLY reader: (coords, colors) lists."""
    lines = text.splitlines()
    assert lines[0] == "ply", "not a PLY document"
    assert lines[1] == "format ascii 1.0", "not ASCII PLY 1.0"
    count = None
    body_at = None
    for i, line in enumerate(lines[2:], start=2):
        if line.startswith("element vertex "):
            count = int(line.split()[-1])
        if line == "end_header":
            body_at = i + 1
            break
    assert count is not None and body_at is not None, "malformed PLY header"
    coords, colors = [], []
    for line in lines[body_at:body_at + count]:
        parts = line.split()
        assert len(parts) == 6, f"malformed vertex line: {line!r}"
        coords.append(tuple(float(v) for v in parts[:3]))
        colors.append(tuple(int(v) for v in parts[3:]))
    assert len(coords) == count, "vertex count differs from header"
    return coords, colors
