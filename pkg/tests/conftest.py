"""Shared fixtures: synthetic corpora generated once per session."""

import numpy as np
import pytest
from scipy import ndimage

import helpers

BLUR_SIGMA = 4.0
BLURRED_INDICES = tuple(range(2, 100, 5))  # 20 of 100, spread through the sequence


@pytest.fixture(scope="session")
def textured_image():
    return helpers.textured(64, 96, seed=11)


@pytest.fixture(scope="session")
def blur_corpus(tmp_path_factory):
    """100-frame corpus: textured base plus per-frame noise, with the frames
    at BLURRED_INDICES Gaussian-blurred after the noise is added.

    Returns (frames_dir, blurred_names, sharp_names).
    """
    frames_dir = tmp_path_factory.mktemp("blur_corpus")
    base = helpers.textured(48, 96, seed=3)
    rng = np.random.RandomState(29)
    blurred_names, sharp_names = [], []
    for i in range(100):
        frame = np.clip(base + rng.uniform(-2.0, 2.0, base.shape), 0.0, 255.0)
        name = f"frame_{i:04d}.png"
        if i in BLURRED_INDICES:
            frame = ndimage.gaussian_filter(frame, sigma=BLUR_SIGMA, mode="nearest")
            blurred_names.append(name)
        else:
            sharp_names.append(name)
        helpers.save_gray_png(frames_dir / name, frame)
    return frames_dir, blurred_names, sharp_names
