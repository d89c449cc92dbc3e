"""Raster primitives: grayscale, convolution, variance, resizing, loading."""

import numpy as np
import pytest
from PIL import Image
from scipy import ndimage

import helpers
from panotriage import imaging
from panotriage.exceptions import InvalidImage


def test_grayscale_pure_white():
    white = np.full((2, 2, 3), 255, dtype=np.uint8)
    assert np.array_equal(imaging.to_grayscale(white), np.full((2, 2), 255.0))


def test_grayscale_pure_red():
    red = np.zeros((1, 1, 3), dtype=np.uint8)
    red[..., 0] = 255
    assert imaging.to_grayscale(red)[0, 0] == pytest.approx(76.245, abs=1e-9)


def test_grayscale_empty_raster_rejected():
    with pytest.raises(InvalidImage):
        imaging.to_grayscale(np.zeros((0, 0, 3), dtype=np.uint8))


def test_grayscale_wrong_shape_rejected():
    with pytest.raises(InvalidImage):
        imaging.to_grayscale(np.zeros((4, 4), dtype=np.uint8))


def test_grayscale_range(textured_image):
    rng = np.random.RandomState(0)
    rgb = rng.randint(0, 256, (16, 16, 3), dtype=np.uint8)
    gray = imaging.to_grayscale(rgb)
    assert gray.min() >= 0.0 and gray.max() <= 255.0


def test_convolve_identity_kernel(textured_image):
    identity = np.zeros((3, 3))
    identity[1, 1] = 1.0
    out = imaging.convolve3x3(textured_image, identity)
    assert np.allclose(out, textured_image, atol=1e-12)


def test_convolve_constant_laplacian_zero():
    out = imaging.convolve3x3(np.full((7, 9), 41.0), imaging.LAPLACIAN_4)
    assert np.array_equal(out, np.zeros((7, 9)))


def test_convolve_center_impulse():
    img = np.zeros((5, 5))
    img[2, 2] = 255.0
    out = imaging.convolve3x3(img, imaging.LAPLACIAN_4)
    expect = np.zeros((5, 5))
    expect[2, 2] = -1020.0
    expect[1, 2] = expect[3, 2] = expect[2, 1] = expect[2, 3] = 255.0
    assert np.array_equal(out, expect)


def test_convolve_replicate_border():
    # A horizontal ramp has zero Laplacian in the interior; replicate
    # borders make the left/right columns see a one-sided step.
    img = np.tile(np.arange(6.0), (4, 1))
    out = imaging.convolve3x3(img, imaging.LAPLACIAN_4)
    assert np.array_equal(out[:, 1:-1], np.zeros((4, 4)))
    assert np.array_equal(out[:, 0], np.full(4, 1.0))
    assert np.array_equal(out[:, -1], np.full(4, -1.0))


def test_convolve_is_linear(textured_image):
    rng = np.random.RandomState(7)
    other = rng.rand(*textured_image.shape) * 255
    kernel = rng.rand(3, 3) - 0.5
    a, b = 0.7, -1.3
    combined = imaging.convolve3x3(a * textured_image + b * other, kernel)
    separate = a * imaging.convolve3x3(textured_image, kernel) + b * imaging.convolve3x3(other, kernel)
    assert np.allclose(combined, separate, atol=1e-6)


def test_convolve_rejects_bad_kernel(textured_image):
    with pytest.raises(ValueError):
        imaging.convolve3x3(textured_image, np.ones((2, 2)))
    with pytest.raises(ValueError):
        imaging.convolve3x3(textured_image, np.full((3, 3), np.nan))


def test_variance_constant_exactly_zero():
    assert imaging.variance(np.full((12, 9), 37.0)) == 0.0


def test_variance_hand_values():
    assert imaging.variance(np.array([0.0, 0.0, 0.0, 4.0])) == pytest.approx(3.0, abs=1e-12)
    assert imaging.variance(np.array([-2.0, 2.0])) == pytest.approx(4.0, abs=1e-12)


def test_variance_translation_invariant(textured_image):
    v0 = imaging.variance(textured_image)
    v1 = imaging.variance(textured_image + 1000.0)
    assert v1 == pytest.approx(v0, rel=1e-6)


def test_variance_empty_rejected():
    with pytest.raises(InvalidImage):
        imaging.variance(np.zeros(0))


def test_variance_of_laplacian_decreases_with_blur(textured_image):
    scores = [
        imaging.variance_of_laplacian(
            textured_image if radius == 0
            else ndimage.gaussian_filter(textured_image, sigma=radius, mode="nearest"))
        for radius in (0, 1, 2, 4)
    ]
    assert all(a > b for a, b in zip(scores, scores[1:])), scores


def test_downscale_block_mean():
    img = np.arange(16.0).reshape(4, 4)
    out = imaging.downscale(img, 2)
    assert np.array_equal(out, np.array([[2.5, 4.5], [10.5, 12.5]]))


def test_downscale_trims_remainder():
    img = np.arange(30.0).reshape(5, 6)
    out = imaging.downscale(img, 2)
    assert out.shape == (2, 3)
    assert out[0, 0] == pytest.approx((0 + 1 + 6 + 7) / 4.0)


def test_downscale_factor_one_identity(textured_image):
    assert np.array_equal(imaging.downscale(textured_image, 1), textured_image)


def test_downscale_rejects_bad_factor(textured_image):
    with pytest.raises(ValueError):
        imaging.downscale(textured_image, 0)
    with pytest.raises(InvalidImage):
        imaging.downscale(np.ones((2, 2)), 3)


def test_thumbnail_never_upscales():
    img = np.ones((10, 20))
    assert imaging.thumbnail(img, 64, 32).shape == (10, 20)
    assert imaging.thumbnail(img, 10, 5).shape == (5, 10)


def test_thumbnail_preserves_mean(textured_image):
    thumb = imaging.thumbnail(textured_image, 32, 16)
    assert thumb.shape == (16, 32)
    # 64x96 partitions evenly into 16x32 blocks, so means match exactly.
    assert thumb.mean() == pytest.approx(textured_image.mean(), rel=1e-12)


def test_mean_abs_diff():
    a = np.full((4, 4), 10.0)
    b = np.full((4, 4), 60.0)
    assert imaging.mean_abs_diff(a, b) == 50.0
    assert imaging.mean_abs_diff(a, a) == 0.0
    with pytest.raises(InvalidImage):
        imaging.mean_abs_diff(a, np.ones((3, 3)))


def test_load_gray_roundtrip(tmp_path, textured_image):
    path = tmp_path / "frame.png"
    helpers.save_gray_png(path, textured_image)
    loaded = imaging.load_gray(path)
    assert loaded.shape == textured_image.shape
    assert np.abs(loaded - np.round(textured_image)).max() <= 1e-12


def test_load_gray_rgb_matches_to_grayscale(tmp_path):
    rng = np.random.RandomState(3)
    rgb = rng.randint(0, 256, (20, 30, 3), dtype=np.uint8)
    path = tmp_path / "frame.png"
    Image.fromarray(rgb, mode="RGB").save(path)
    assert np.array_equal(imaging.load_gray(path), imaging.to_grayscale(rgb))


def test_load_gray_undecodable(tmp_path):
    path = tmp_path / "broken.png"
    path.write_bytes(b"this is not an image")
    with pytest.raises(InvalidImage):
        imaging.load_gray(path)


def test_load_gray_downscale(tmp_path, textured_image):
    path = tmp_path / "frame.png"
    helpers.save_gray_png(path, textured_image)
    assert imaging.load_gray(path, 2).shape == (32, 48)


def test_natural_sort_order(tmp_path):
    for name in ("frame10.png", "frame2.png", "frame1.png", "other.jpg", "notes.txt"):
        (tmp_path / name).write_bytes(b"")
    names = [p.name for p in imaging.list_image_files(tmp_path)]
    assert names == ["frame1.png", "frame2.png", "frame10.png", "other.jpg"]
