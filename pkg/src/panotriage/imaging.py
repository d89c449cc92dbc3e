"""Raster primitives: grayscale conversion, 3x3 convolution, variance.

A grayscale image is a 2D float64 array, row-major, samples in [0, 255].
Convolution outputs are "signed rasters": same shape, but unclamped, so
they may hold negative values.  A 3x3 kernel is a (3, 3) float array.
"""

import re
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from . import kernels
from .exceptions import InvalidImage

# 4-neighbor discrete Laplacian, the stencil behind the variance-of-Laplacian
# sharpness metric.
LAPLACIAN_4 = np.array([[0.0, 1.0, 0.0], [1.0, -4.0, 1.0], [0.0, 1.0, 0.0]])

IMAGE_SUFFIXES = {".png", ".jpg", ".jpeg"}


def _as_raster(img, name="image"):
    """Coerce to a contiguous 2D float64 array with at least one pixel."""
    arr = np.ascontiguousarray(np.asarray(img, dtype=np.float64))
    if arr.ndim != 2 or arr.size == 0:
        raise InvalidImage(f"{name} must be a non-empty 2D raster, got shape {arr.shape}")
    return arr


def validate_gray(img):
    """Check grayscale invariants: 2D, non-empty, finite, samples in [0, 255]."""
    arr = _as_raster(img, "grayscale image")
    if not np.all(np.isfinite(arr)):
        raise InvalidImage("grayscale image contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 255.0:
        raise InvalidImage("grayscale samples outside [0, 255]")
    return arr


def to_grayscale(rgb):
    """Convert an (H, W, 3) 8-bit RGB raster to BT.601 luminance."""
    arr = np.asarray(rgb)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidImage(f"expected a non-empty (H, W, 3) raster, got shape {arr.shape}")
    return kernels.rgb_to_gray(np.ascontiguousarray(arr, dtype=np.uint8))


def convolve3x3(img, kernel):
    """Convolve with a 3x3 kernel; replicate borders, output left unclamped."""
    arr = _as_raster(img)
    k = np.ascontiguousarray(np.asarray(kernel, dtype=np.float64))
    if k.shape != (3, 3):
        raise ValueError(f"kernel must be 3x3, got shape {k.shape}")
    if not np.all(np.isfinite(k)):
        raise ValueError("kernel coefficients must be finite")
    return kernels.convolve3x3(arr, k)


def variance(raster):
    """Population variance (divide by N) of a raster or sample array."""
    arr = np.ascontiguousarray(np.asarray(raster, dtype=np.float64).ravel())
    if arr.size == 0:
        raise InvalidImage("variance of an empty raster")
    if not np.all(np.isfinite(arr)):
        raise InvalidImage("variance input contains non-finite samples")
    return kernels.variance(arr)


def variance_of_laplacian(img):
    """Sharpness score: variance of the Laplacian-filtered image."""
    return variance(convolve3x3(img, LAPLACIAN_4))


def downscale(img, factor):
    """Block-mean downscale by an integer factor; trailing remainder rows and
    columns are trimmed.  factor=1 returns the validated input unchanged."""
    if int(factor) != factor or factor < 1:
        raise ValueError(f"downscale factor must be an integer >= 1, got {factor!r}")
    arr = _as_raster(img)
    factor = int(factor)
    if factor == 1:
        return arr
    h, w = arr.shape
    out_h, out_w = h // factor, w // factor
    if out_h == 0 or out_w == 0:
        raise InvalidImage(f"image {w}x{h} too small for downscale factor {factor}")
    trimmed = np.ascontiguousarray(arr[: out_h * factor, : out_w * factor])
    return kernels.box_resize(trimmed, out_h, out_w)


def thumbnail(img, width, height):
    """Block-mean thumbnail for frame comparison; target dimensions are
    clamped to the source size (never upscales)."""
    arr = _as_raster(img)
    h, w = arr.shape
    return kernels.box_resize(arr, min(int(height), h), min(int(width), w))


def mean_abs_diff(a, b):
    """Mean absolute difference between two rasters of identical shape."""
    ra, rb = _as_raster(a, "first raster"), _as_raster(b, "second raster")
    if ra.shape != rb.shape:
        raise InvalidImage(f"raster shapes differ: {ra.shape} vs {rb.shape}")
    return kernels.mean_abs_diff(ra, rb)


def load_gray(path, downscale_factor=1):
    """Decode a PNG/JPEG file to a grayscale raster (optionally downscaled)."""
    try:
        with Image.open(path) as im:
            if im.mode in ("L", "I;16", "I"):
                arr = np.asarray(im.convert("L"), dtype=np.float64)
                gray = _as_raster(arr, str(path))
            else:
                gray = to_grayscale(np.asarray(im.convert("RGB")))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise InvalidImage(f"cannot decode {path}: {exc}") from exc
    return downscale(gray, downscale_factor)


def natural_key(name):
    """Sort key treating digit runs numerically (frame2 < frame10)."""
    return [int(tok) if tok.isdigit() else tok.lower() for tok in re.split(r"(\d+)", str(name))]


def list_image_files(directory):
    """PNG/JPEG files in a directory, natural-sorted by filename."""
    directory = Path(directory)
    files = [p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES]
    return sorted(files, key=lambda p: natural_key(p.name))
