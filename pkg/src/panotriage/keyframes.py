"""Keyframe reduction: thumbnail-difference selection or external listings.

The built-in selector compares each frame's downscaled thumbnail against
the last *selected* keyframe (not the previous raw frame, so slow drift
cannot pass under the threshold indefinitely).  When a real SLAM keyframe
listing exists, ingest it instead.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from . import imaging
from .exceptions import BadListing

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KeyframePolicy:
    """Selection tunables.  Thumbnail defaults keep the 2:1 equirectangular
    aspect; min_gap=5 caps output at 6 keyframes/second of 30 fps video."""

    similarity_threshold: float = 8.0
    min_gap: int = 5
    thumb_width: int = 64
    thumb_height: int = 32

    def __post_init__(self):
        if not 0.0 <= self.similarity_threshold <= 255.0:
            raise ValueError(f"similarity_threshold must be in [0, 255], got {self.similarity_threshold}")
        if self.min_gap < 1:
            raise ValueError(f"min_gap must be >= 1, got {self.min_gap}")
        if self.thumb_width < 8 or self.thumb_height < 4:
            raise ValueError(f"thumbnails must be at least 8x4, got {self.thumb_width}x{self.thumb_height}")


def select_keyframes(frames, policy=KeyframePolicy()):
    """Yield the representative subset of an ordered frame iterable.

    The first frame is always selected; a later frame is selected iff its
    position is at least min_gap past the last selected frame and its
    thumbnail mean-absolute-difference to that keyframe exceeds the
    similarity threshold.  Streams: holds one thumbnail, never the rasters.
    """
    last_thumb = None
    last_pos = 0
    for pos, rec in enumerate(frames):
        thumb = imaging.thumbnail(rec.gray, policy.thumb_width, policy.thumb_height)
        if last_thumb is None:
            selected = True
        else:
            selected = (
                pos - last_pos >= policy.min_gap
                and imaging.mean_abs_diff(thumb, last_thumb) > policy.similarity_threshold
            )
        if selected:
            last_thumb = thumb
            last_pos = pos
            yield rec


def read_listing(path):
    """Non-comment, non-blank lines of a keyframe listing file, with the
    1-based line number of each."""
    entries = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            entries.append((lineno, line))
    return entries


def write_listing(path, entries):
    Path(path).write_text("".join(f"{e}\n" for e in entries), encoding="utf-8")


def ingest_external_keyframes(entries, frames):
    """Resolve a keyframe listing against an ordered frame list.

    Entries are (line_number, text) pairs; each text is either a frame
    index or a filename.  Returns exactly the listed frames in listing
    order.  Out-of-range indices, unknown filenames and non-ascending
    positions raise BadListing with the offending line.
    """
    frames = list(frames)
    by_name = {}
    for pos, rec in enumerate(frames):
        if rec.filename:
            by_name.setdefault(rec.filename, pos)
    selected = []
    last_pos = -1
    for lineno, text in entries:
        if text.isdigit() or (text.startswith("-") and text[1:].isdigit()):
            pos = int(text)
            if pos < 0 or pos >= len(frames):
                raise BadListing(f"frame index {pos} outside [0, {len(frames) - 1}]", line=lineno)
        else:
            pos = by_name.get(text)
            if pos is None:
                raise BadListing(f"unknown frame filename {text!r}", line=lineno)
        if pos <= last_pos:
            raise BadListing(f"listing not ascending at index {pos}", line=lineno)
        last_pos = pos
        selected.append(frames[pos])
    if not selected:
        logger.warning("external keyframe listing is empty; selecting no frames")
    return selected
