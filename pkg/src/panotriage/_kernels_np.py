"""Numpy implementations of the hot raster kernels.

Fallback backend used when the compiled extension is unavailable.  All
functions assume validated, C-contiguous float64 input (uint8 for RGB);
validation lives in :mod:`panotriage.imaging`.
"""

import numpy as np

_BT601 = np.array([0.299, 0.587, 0.114])


def rgb_to_gray(rgb):
    """BT.601 luminance of an (H, W, 3) uint8 raster, clamped to [0, 255]."""
    out = rgb.astype(np.float64) @ _BT601
    np.clip(out, 0.0, 255.0, out=out)
    return out


def convolve3x3(img, kernel):
    """3x3 convolution with replicate (clamp-to-edge) borders, unclamped output."""
    h, w = img.shape
    padded = np.pad(img, 1, mode="edge")
    out = np.zeros((h, w), dtype=np.float64)
    for di in range(3):
        for dj in range(3):
            c = kernel[di, dj]
            if c != 0.0:
                out += c * padded[di:di + h, dj:dj + w]
    return out


def variance(flat):
    """Population variance of a 1D float64 array (two-pass)."""
    mean = flat.mean()
    d = flat - mean
    return float((d * d).mean())


def box_resize(img, out_h, out_w):
    """Block-mean downscale to (out_h, out_w); each output pixel averages its
    source partition [i*h//out_h, (i+1)*h//out_h) x [j*w//out_w, (j+1)*w//out_w)."""
    h, w = img.shape
    row_starts = (np.arange(out_h) * h) // out_h
    col_starts = (np.arange(out_w) * w) // out_w
    sums = np.add.reduceat(np.add.reduceat(img, row_starts, axis=0), col_starts, axis=1)
    row_counts = np.diff(np.append(row_starts, h))
    col_counts = np.diff(np.append(col_starts, w))
    return sums / np.outer(row_counts, col_counts)


def mean_abs_diff(a, b):
    """Mean absolute difference between two equally-shaped rasters."""
    return float(np.abs(a - b).mean())
