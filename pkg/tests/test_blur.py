"""Dynamic-threshold blur classifier: window means, verdicts, CSV format."""

import numpy as np
import pytest

import helpers
from panotriage import blur, imaging
from panotriage.exceptions import EmptySeries, InvalidSeries, NotComputed


def computed(variances, k):
    return blur.compute_thresholds(blur.BlurSeries(np.asarray(variances, dtype=np.float64), k=k))


def test_constant_sequence():
    series = computed([4.0, 4.0, 4.0], k=1)
    assert np.array_equal(series.thresholds, [4.0, 4.0, 4.0])
    assert all(v.keep for v in blur.classify(series))


def test_boundary_window_mean():
    series = computed([10.0, 20.0, 30.0], k=1)
    assert series.thresholds[0] == pytest.approx(15.0, abs=1e-12)
    assert series.thresholds[1] == pytest.approx(20.0, abs=1e-12)
    assert series.thresholds[2] == pytest.approx(25.0, abs=1e-12)
    assert list(series.j_counts) == [1, 0, 1]


def test_window_larger_than_sequence():
    series = computed([10.0, 20.0, 30.0, 40.0, 50.0], k=20)
    assert series.thresholds[2] == pytest.approx(30.0, abs=1e-12)
    assert series.j_counts[2] == 36
    assert np.allclose(series.thresholds, 30.0)


def test_spec_five_frame_example():
    series = computed([100.0, 100.0, 5.0, 100.0, 100.0], k=2)
    expect = [205.0 / 3.0, 305.0 / 4.0, 81.0, 305.0 / 4.0, 205.0 / 3.0]
    assert np.allclose(series.thresholds, expect, atol=1e-12)
    verdicts = blur.classify(series)
    assert [v.keep for v in verdicts] == [True, True, False, True, True]


def test_single_frame_any_k():
    series = computed([123.456], k=20)
    assert series.thresholds[0] == 123.456
    assert blur.classify(series)[0].keep


def test_k_zero_keeps_everything():
    rng = np.random.RandomState(2)
    series = computed(rng.rand(50) * 100, k=0)
    assert np.array_equal(series.thresholds, series.variances)
    assert all(v.keep for v in blur.classify(series))


def test_oracle_equivalence_sample():
    rng = np.random.RandomState(17)
    for _ in range(100):
        n = rng.randint(1, 51)
        k = rng.randint(0, 26)
        variances = rng.rand(n) * 1e4
        series = computed(variances, k=k)
        expect, js = helpers.brute_thresholds(list(variances), k)
        assert np.allclose(series.thresholds, expect, rtol=1e-12, atol=0.0)
        assert list(series.j_counts) == js


def test_threshold_within_window_range():
    rng = np.random.RandomState(23)
    variances = rng.rand(80) * 500
    k = 7
    series = computed(variances, k=k)
    for n in range(80):
        window = variances[max(0, n - k):n + k + 1]
        assert window.min() - 1e-12 <= series.thresholds[n] <= window.max() + 1e-12


def test_scale_equivariance():
    rng = np.random.RandomState(5)
    variances = rng.rand(40) * 100
    a = computed(variances, k=6)
    b = computed(variances * 7.5, k=6)
    assert np.allclose(b.thresholds, a.thresholds * 7.5, rtol=1e-12)
    assert [v.keep for v in blur.classify(a)] == [v.keep for v in blur.classify(b)]


def test_j_counts_bounds():
    series = computed(np.ones(30), k=4)
    assert series.j_counts.min() >= 0
    assert series.j_counts.max() <= 8


def test_input_not_mutated():
    original = blur.BlurSeries(np.array([1.0, 2.0, 3.0]), k=1)
    blur.compute_thresholds(original)
    assert original.thresholds is None and original.j_counts is None


def test_error_cases():
    with pytest.raises(EmptySeries):
        blur.compute_thresholds(blur.BlurSeries(np.zeros(0), k=1))
    with pytest.raises(InvalidSeries):
        blur.compute_thresholds(blur.BlurSeries(np.array([1.0, np.nan]), k=1))
    with pytest.raises(InvalidSeries):
        blur.compute_thresholds(blur.BlurSeries(np.array([1.0, -2.0]), k=1))
    with pytest.raises(InvalidSeries):
        blur.compute_thresholds(blur.BlurSeries(np.array([1.0]), k=-1))
    with pytest.raises(NotComputed):
        blur.classify(blur.BlurSeries(np.array([1.0]), k=1))


def test_filter_frames_identical_sharp_all_kept(textured_image):
    frames = [blur.FrameRecord(index=i, filename=f"f{i}.png", gray=textured_image) for i in range(10)]
    kept, discarded, report = blur.filter_frames(frames, k=3)
    assert len(kept) == 10 and not discarded
    assert report.summary() == {"total": 10, "kept": 10, "discarded": 0, "k": 3}


def test_filter_frames_scores_missing_variances(textured_image):
    frames = [
        blur.FrameRecord(index=0, gray=textured_image),
        blur.FrameRecord(index=1, variance=100.0),
    ]
    kept, discarded, report = blur.filter_frames(frames, k=1)
    assert frames[0].variance == pytest.approx(imaging.variance_of_laplacian(textured_image))
    assert len(kept) + len(discarded) == 2


def test_filter_frames_requires_score_source():
    with pytest.raises(InvalidSeries):
        blur.filter_frames([blur.FrameRecord(index=0)], k=1)
    with pytest.raises(EmptySeries):
        blur.filter_frames([], k=1)


def test_score_csv_roundtrip(tmp_path):
    rng = np.random.RandomState(31)
    variances = rng.rand(9) * 12345.678
    series = computed(variances, k=2)
    verdicts = blur.classify(series)
    names = [f"frame_{i:03d}.png" for i in range(9)]
    path = tmp_path / "scores.csv"
    blur.write_score_csv(path, names, verdicts)

    header = path.read_text().splitlines()[0]
    assert header == "frame_index,filename,variance,threshold,keep"
    read_names, read_verdicts = blur.read_score_csv(path)
    assert read_names == names
    # repr serialization round-trips every float bit-exactly.
    assert read_verdicts == verdicts


def test_score_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "scores.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(InvalidSeries):
        blur.read_score_csv(path)


def test_blur_corpus_recovery(blur_corpus):
    frames_dir, blurred_names, sharp_names = blur_corpus
    records = []
    for i, path in enumerate(sorted(frames_dir.iterdir())):
        records.append(blur.FrameRecord(index=i, filename=path.name, gray=imaging.load_gray(path)))
    kept, discarded, _ = blur.filter_frames(records, k=20)
    discarded_names = {rec.filename for rec in discarded}
    caught = sum(1 for name in blurred_names if name in discarded_names)
    false_positives = sum(1 for name in sharp_names if name in discarded_names)
    assert caught >= 0.9 * len(blurred_names), f"only {caught}/{len(blurred_names)} blurred frames discarded"
    assert false_positives <= 0.1 * len(sharp_names), f"{false_positives} sharp frames discarded"
