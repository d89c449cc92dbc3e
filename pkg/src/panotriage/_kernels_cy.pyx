# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot raster kernels.

Same contracts as panotriage._kernels_np; single-pass C loops instead of
shifted-slice arithmetic, which avoids the per-frame temporaries that
dominate when scoring tens of thousands of panorama frames.
"""

import numpy as np

from libc.math cimport fabs


def rgb_to_gray(const unsigned char[:, :, ::1] rgb):
    """BT.601 luminance of an (H, W, 3) uint8 raster, clamped to [0, 255]."""
    cdef Py_ssize_t h = rgb.shape[0], w = rgb.shape[1]
    cdef Py_ssize_t i, j
    cdef double v
    out = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in range(h):
        for j in range(w):
            v = 0.299 * rgb[i, j, 0] + 0.587 * rgb[i, j, 1] + 0.114 * rgb[i, j, 2]
            if v > 255.0:
                v = 255.0
            elif v < 0.0:
                v = 0.0
            o[i, j] = v
    return out


def convolve3x3(const double[:, ::1] img, const double[:, ::1] kernel):
    """3x3 convolution with replicate (clamp-to-edge) borders, unclamped output."""
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t i, j, iu, id_, jl, jr
    cdef double k00 = kernel[0, 0], k01 = kernel[0, 1], k02 = kernel[0, 2]
    cdef double k10 = kernel[1, 0], k11 = kernel[1, 1], k12 = kernel[1, 2]
    cdef double k20 = kernel[2, 0], k21 = kernel[2, 1], k22 = kernel[2, 2]
    out = np.empty((h, w), dtype=np.float64)
    cdef double[:, ::1] o = out
    for i in range(h):
        iu = i - 1 if i > 0 else 0
        id_ = i + 1 if i < h - 1 else h - 1
        for j in range(w):
            jl = j - 1 if j > 0 else 0
            jr = j + 1 if j < w - 1 else w - 1
            o[i, j] = (k00 * img[iu, jl] + k01 * img[iu, j] + k02 * img[iu, jr]
                       + k10 * img[i, jl] + k11 * img[i, j] + k12 * img[i, jr]
                       + k20 * img[id_, jl] + k21 * img[id_, j] + k22 * img[id_, jr])
    return out


def variance(const double[::1] flat):
    """Population variance of a 1D float64 array (two-pass)."""
    cdef Py_ssize_t n = flat.shape[0], i
    cdef double s = 0.0, mean, d, acc = 0.0
    for i in range(n):
        s += flat[i]
    mean = s / n
    for i in range(n):
        d = flat[i] - mean
        acc += d * d
    return acc / n


def box_resize(const double[:, ::1] img, Py_ssize_t out_h, Py_ssize_t out_w):
    """Block-mean downscale to (out_h, out_w); each output pixel averages its
    source partition [i*h//out_h, (i+1)*h//out_h) x [j*w//out_w, (j+1)*w//out_w)."""
    cdef Py_ssize_t h = img.shape[0], w = img.shape[1]
    cdef Py_ssize_t oi, oj, r0, r1, c0, c1, i, j
    cdef double acc
    out = np.empty((out_h, out_w), dtype=np.float64)
    cdef double[:, ::1] o = out
    for oi in range(out_h):
        r0 = (oi * h) // out_h
        r1 = ((oi + 1) * h) // out_h
        for oj in range(out_w):
            c0 = (oj * w) // out_w
            c1 = ((oj + 1) * w) // out_w
            acc = 0.0
            for i in range(r0, r1):
                for j in range(c0, c1):
                    acc += img[i, j]
            o[oi, oj] = acc / ((r1 - r0) * (c1 - c0))
    return out


def mean_abs_diff(const double[:, ::1] a, const double[:, ::1] b):
    """Mean absolute difference between two equally-shaped rasters."""
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1], i, j
    cdef double acc = 0.0
    for i in range(h):
        for j in range(w):
            acc += fabs(a[i, j] - b[i, j])
    return acc / (h * w)
