"""Dynamic-threshold blur classifier over an ordered frame sequence.

Each frame's sharpness is its variance of Laplacian.  The per-frame
threshold is the mean variance over a window of k frames on each side;
window indices that fall outside the sequence are excluded from the mean
(the count of such indices is kept per frame as ``j_counts``).  A frame is
kept when its variance is >= its threshold; ties keep.
"""

import csv
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import imaging
from .exceptions import EmptySeries, InvalidSeries, NotComputed

DEFAULT_K = 20

CSV_HEADER = ["frame_index", "filename", "variance", "threshold", "keep"]


@dataclass
class FrameRecord:
    """One extracted video frame."""

    index: int
    filename: str = ""
    timestamp: float = 0.0
    gray: Optional[np.ndarray] = None
    variance: Optional[float] = None


@dataclass
class BlurSeries:
    """Ordered per-frame variances plus window parameters and results."""

    variances: np.ndarray
    k: int = DEFAULT_K
    thresholds: Optional[np.ndarray] = None
    j_counts: Optional[np.ndarray] = None


@dataclass(frozen=True)
class FilterVerdict:
    frame_index: int
    variance: float
    threshold: float
    keep: bool


@dataclass
class FilterReport:
    verdicts: list = field(default_factory=list)
    k: int = DEFAULT_K

    @property
    def total(self):
        return len(self.verdicts)

    @property
    def kept_count(self):
        return sum(1 for v in self.verdicts if v.keep)

    @property
    def discarded_count(self):
        return self.total - self.kept_count

    def summary(self):
        return {
            "total": self.total,
            "kept": self.kept_count,
            "discarded": self.discarded_count,
            "k": self.k,
        }


def _validated_variances(series):
    v = np.asarray(series.variances, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise EmptySeries("blur series has no frames")
    if not np.all(np.isfinite(v)):
        raise InvalidSeries("blur series contains non-finite variances")
    if v.min() < 0.0:
        raise InvalidSeries("blur series contains negative variances")
    if series.k < 0:
        raise InvalidSeries(f"window half-width k must be >= 0, got {series.k}")
    return v


def compute_thresholds(series):
    """Fill per-frame thresholds and out-of-range counts.

    thresholds[n] is the mean of variances over the existing indices in
    [n-k, n+k]; j_counts[n] is how many window indices fell outside the
    sequence.  Returns a new BlurSeries; the input is not mutated.
    """
    v = _validated_variances(series)
    n = v.size
    k = int(series.k)
    window = 2 * k + 1
    thresholds = np.empty(n, dtype=np.float64)
    j_counts = np.empty(n, dtype=np.int64)
    for i in range(n):
        lo = i - k if i - k > 0 else 0
        hi = i + k if i + k < n - 1 else n - 1
        thresholds[i] = v[lo:hi + 1].mean()
        j_counts[i] = window - (hi - lo + 1)
    return replace(series, variances=v, thresholds=thresholds, j_counts=j_counts)


def classify(series):
    """One verdict per frame, in order; keep iff variance >= threshold."""
    if series.thresholds is None:
        raise NotComputed("compute_thresholds must run before classify")
    v = np.asarray(series.variances, dtype=np.float64)
    t = np.asarray(series.thresholds, dtype=np.float64)
    if v.shape != t.shape:
        raise InvalidSeries(f"variances/thresholds length mismatch: {v.shape} vs {t.shape}")
    return [
        FilterVerdict(frame_index=i, variance=float(v[i]), threshold=float(t[i]), keep=bool(v[i] >= t[i]))
        for i in range(v.size)
    ]


def filter_frames(frames, k=DEFAULT_K):
    """Score, threshold and partition an ordered frame list.

    Frames may carry precomputed variances; otherwise their grayscale
    rasters are scored here.  Returns (kept, discarded, report) with the
    input order preserved in both partitions.
    """
    frames = list(frames)
    if not frames:
        raise EmptySeries("no frames to filter")
    variances = np.empty(len(frames), dtype=np.float64)
    for i, rec in enumerate(frames):
        if rec.variance is not None:
            variances[i] = rec.variance
        elif rec.gray is not None:
            variances[i] = imaging.variance_of_laplacian(rec.gray)
            rec.variance = float(variances[i])
        else:
            raise InvalidSeries(f"frame {rec.index} has neither variance nor raster")
    series = compute_thresholds(BlurSeries(variances=variances, k=k))
    verdicts = classify(series)
    kept = [rec for rec, verdict in zip(frames, verdicts) if verdict.keep]
    discarded = [rec for rec, verdict in zip(frames, verdicts) if not verdict.keep]
    return kept, discarded, FilterReport(verdicts=verdicts, k=k)


def write_score_csv(path, filenames, verdicts):
    """Write the score file: one row per frame, ascending frame order,
    floats at full round-trip precision."""
    if len(filenames) != len(verdicts):
        raise InvalidSeries(f"{len(filenames)} filenames for {len(verdicts)} verdicts")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for name, verdict in zip(filenames, verdicts):
            writer.writerow([
                verdict.frame_index,
                name,
                repr(verdict.variance),
                repr(verdict.threshold),
                int(verdict.keep),
            ])


def read_score_csv(path):
    """Read a score file back into (filenames, verdicts)."""
    filenames = []
    verdicts = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise InvalidSeries(f"unexpected score CSV header: {header}")
        for row in reader:
            if len(row) != len(CSV_HEADER):
                raise InvalidSeries(f"malformed score CSV row: {row}")
            filenames.append(row[1])
            verdicts.append(FilterVerdict(
                frame_index=int(row[0]),
                variance=float(row[2]),
                threshold=float(row[3]),
                keep=bool(int(row[4])),
            ))
    return filenames, verdicts
