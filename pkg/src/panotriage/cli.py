"""Command-line orchestration: score -> filter -> keyframes -> tour -> export.

Exit codes: 0 ok, 2 empty or invalid input, 3 decode failure,
4 inconsistency between inputs, 5 refusal to overwrite existing output.
"""

import argparse
import json
import logging
import os
import shutil
import sys
from pathlib import Path

import numpy as np

from . import blur, imaging, keyframes, sfm, tour
from .config import CONFIG_ENV_VAR, PipelineConfig, apply_overrides, resolve_config
from .exceptions import (
    BadListing,
    ConfigError,
    EmptyModel,
    EmptySeries,
    InvalidImage,
    InvalidSeries,
    NoReconstruction,
    ParseError,
    SchemaError,
    TriageError,
)

logger = logging.getLogger("triage")

EXIT_OK = 0
EXIT_EMPTY_INPUT = 2
EXIT_DECODE = 3
EXIT_INCONSISTENT = 4
EXIT_OVERWRITE = 5

_DEFAULTS = PipelineConfig()


def _fail(code, message):
    print(f"triage: error: {message}", file=sys.stderr)
    return code


def _refuse(path, force):
    if Path(path).exists() and not force:
        return _fail(EXIT_OVERWRITE, f"{path} exists; pass --force to overwrite")
    return None


def _score_frames(files, downscale, lenient):
    """Stream-decode and score frames one at a time; memory stays bounded
    by a single frame plus the variance list."""
    names, variances, bad = [], [], []
    for path in files:
        try:
            gray = imaging.load_gray(path, downscale)
        except InvalidImage as exc:
            bad.append(path.name)
            if lenient:
                logger.warning("skipping undecodable frame %s: %s", path.name, exc)
            continue
        names.append(path.name)
        variances.append(imaging.variance_of_laplacian(gray))
    return names, variances, bad


def cmd_score(args, cfg):
    frames_dir = Path(args.frames_dir)
    if not frames_dir.is_dir():
        return _fail(EXIT_EMPTY_INPUT, f"{frames_dir} is not a directory")
    files = imaging.list_image_files(frames_dir)
    if not files:
        return _fail(EXIT_EMPTY_INPUT, f"no PNG/JPEG frames in {frames_dir}")
    refused = _refuse(args.output, args.force)
    if refused:
        return refused

    names, variances, bad = _score_frames(files, cfg.downscale, cfg.lenient)
    if bad and not cfg.lenient:
        return _fail(EXIT_DECODE, f"undecodable frames: {', '.join(bad)}")
    if not names:
        return _fail(EXIT_EMPTY_INPUT, "every frame was skipped as undecodable")

    series = blur.compute_thresholds(blur.BlurSeries(np.asarray(variances), k=cfg.k))
    verdicts = blur.classify(series)
    blur.write_score_csv(args.output, names, verdicts)
    report = blur.FilterReport(verdicts=verdicts, k=cfg.k)
    logger.info("scored %d frames (k=%d): %d keep, %d discard -> %s",
                report.total, cfg.k, report.kept_count, report.discarded_count, args.output)
    return EXIT_OK


def cmd_filter(args, cfg):
    frames_dir = Path(args.frames_dir)
    try:
        filenames, scored = blur.read_score_csv(args.scores_csv)
    except OSError as exc:
        return _fail(EXIT_EMPTY_INPUT, f"cannot read {args.scores_csv}: {exc}")
    except InvalidSeries as exc:
        return _fail(EXIT_EMPTY_INPUT, str(exc))
    if not scored:
        return _fail(EXIT_EMPTY_INPUT, f"{args.scores_csv} lists no frames")

    missing = [name for name in filenames if not (frames_dir / name).is_file()]
    if missing:
        return _fail(EXIT_INCONSISTENT, "frames referenced by the CSV are missing on disk: " + ", ".join(missing))
    on_disk = {p.name for p in imaging.list_image_files(frames_dir)}
    extras = sorted(on_disk - set(filenames))
    if extras:
        logger.warning("%d frame(s) on disk are not in the CSV (unscored): %s", len(extras), ", ".join(extras))

    out_dir = Path(args.out_dir)
    discarded_txt = out_dir / "discarded.txt"
    summary_json = out_dir / "summary.json"
    for target in (discarded_txt, summary_json):
        refused = _refuse(target, args.force)
        if refused:
            return refused

    series = blur.compute_thresholds(
        blur.BlurSeries(np.array([v.variance for v in scored]), k=cfg.k))
    verdicts = blur.classify(series)
    kept_dir = out_dir / "kept"
    kept_dir.mkdir(parents=True, exist_ok=True)
    kept_names, discarded_names = [], []
    for name, verdict in zip(filenames, verdicts):
        if verdict.keep:
            kept_names.append(name)
            dest = kept_dir / name
            if dest.exists():
                dest.unlink()
            try:
                os.link(frames_dir / name, dest)
            except OSError:
                shutil.copy2(frames_dir / name, dest)
        else:
            discarded_names.append(name)

    discarded_txt.write_text("".join(f"{n}\n" for n in discarded_names), encoding="utf-8")
    report = blur.FilterReport(verdicts=verdicts, k=cfg.k)
    summary_json.write_text(json.dumps(report.summary(), indent=2) + "\n", encoding="utf-8")
    logger.info("kept %d, discarded %d of %d frames -> %s",
                report.kept_count, report.discarded_count, report.total, out_dir)
    return EXIT_OK


def _iter_gray_frames(files, downscale, lenient):
    for index, path in enumerate(files):
        try:
            gray = imaging.load_gray(path, downscale)
        except InvalidImage as exc:
            if lenient:
                logger.warning("skipping undecodable frame %s: %s", path.name, exc)
                continue
            raise
        yield blur.FrameRecord(index=index, filename=path.name, gray=gray)


def cmd_keyframes(args, cfg):
    frames_dir = Path(args.frames_dir)
    if not frames_dir.is_dir():
        return _fail(EXIT_EMPTY_INPUT, f"{frames_dir} is not a directory")
    files = imaging.list_image_files(frames_dir)
    if not files:
        return _fail(EXIT_EMPTY_INPUT, f"no PNG/JPEG frames in {frames_dir}")
    refused = _refuse(args.output, args.force)
    if refused:
        return refused

    if args.listing:
        try:
            entries = keyframes.read_listing(args.listing)
        except OSError as exc:
            return _fail(EXIT_EMPTY_INPUT, f"cannot read listing {args.listing}: {exc}")
        records = [blur.FrameRecord(index=i, filename=p.name) for i, p in enumerate(files)]
        try:
            selected = keyframes.ingest_external_keyframes(entries, records)
        except BadListing as exc:
            return _fail(EXIT_INCONSISTENT, f"bad keyframe listing: {exc}")
        # Passthrough preserves the listing entries verbatim.
        keyframes.write_listing(args.output, [text for _, text in entries])
        logger.info("ingested %d external keyframes -> %s", len(selected), args.output)
        return EXIT_OK

    policy = keyframes.KeyframePolicy(
        similarity_threshold=cfg.similarity_threshold,
        min_gap=cfg.min_gap,
        thumb_width=cfg.thumb_width,
        thumb_height=cfg.thumb_height,
    )
    try:
        selected = [rec.filename for rec in keyframes.select_keyframes(
            _iter_gray_frames(files, cfg.downscale, cfg.lenient), policy)]
    except InvalidImage as exc:
        return _fail(EXIT_DECODE, str(exc))
    keyframes.write_listing(args.output, selected)
    logger.info("selected %d of %d frames -> %s", len(selected), len(files), args.output)
    return EXIT_OK


def _load_reconstruction(path, lenient):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise NoReconstruction(f"cannot read {path}: {exc}") from exc
    return sfm.parse_reconstruction(text, lenient=lenient)


def cmd_tour(args, cfg):
    try:
        rec = _load_reconstruction(args.reconstruction, cfg.lenient)
    except (ParseError, SchemaError, NoReconstruction) as exc:
        return _fail(EXIT_EMPTY_INPUT, f"cannot parse {args.reconstruction}: {exc}")
    refused = _refuse(args.output, args.force)
    if refused:
        return refused

    image_exists = None
    if args.panos_dir:
        panos_dir = Path(args.panos_dir)
        image_exists = lambda name: (panos_dir / name).is_file()
    try:
        graph = tour.build_graph(
            rec,
            max_neighbors=cfg.max_neighbors,
            max_distance=cfg.max_distance,
            units=cfg.units,
            image_exists=image_exists,
            min_size=cfg.min_size_px,
            max_size=cfg.max_size_px,
        )
    except EmptyModel as exc:
        return _fail(EXIT_EMPTY_INPUT, str(exc))
    absent = [n.id for n in graph.nodes if n.missing_image]
    if absent:
        logger.warning("%d panorama file(s) missing under %s: %s; nodes flagged in the tour",
                       len(absent), args.panos_dir, ", ".join(absent))
    Path(args.output).write_text(tour.emit_tour(graph), encoding="utf-8")
    logger.info("tour with %d nodes, %d edges -> %s", len(graph.nodes), len(graph.edges), args.output)
    return EXIT_OK


def cmd_export_ply(args, cfg):
    try:
        rec = _load_reconstruction(args.reconstruction, cfg.lenient)
    except (ParseError, SchemaError, NoReconstruction) as exc:
        return _fail(EXIT_EMPTY_INPUT, f"cannot parse {args.reconstruction}: {exc}")
    refused = _refuse(args.output, args.force)
    if refused:
        return refused
    Path(args.output).write_text(sfm.export_ply(rec, include_shots=args.include_shots), encoding="utf-8")
    logger.info("exported %d points%s -> %s", len(rec.points),
                f" + {len(rec.shots)} shot markers" if args.include_shots else "", args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="triage",
        description="Post-flight triage for 360-degree reconnaissance footage: "
                    "blur scoring, frame filtering, keyframe reduction, and "
                    "panorama tour generation from SfM output.",
    )
    parser.add_argument("--config", help=f"JSON config file (also read from ${CONFIG_ENV_VAR}); flags override it")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress details")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--force", action="store_true", help="overwrite existing outputs")
        p.add_argument("--lenient", action="store_true", default=None,
                       help="skip invalid frames/shots instead of failing (default: strict)")

    p = sub.add_parser("score", help="score frame sharpness into a CSV")
    p.add_argument("frames_dir", help="directory of PNG/JPEG frames (natural filename order)")
    p.add_argument("-o", "--output", default="scores.csv", help="score CSV path (default: %(default)s)")
    p.add_argument("--k", type=int, default=None,
                   help=f"blur window half-width in frames (default: {_DEFAULTS.k})")
    p.add_argument("--downscale", type=int, default=None,
                   help=f"integer downscale factor before scoring (default: {_DEFAULTS.downscale})")
    add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("filter", help="partition frames by the dynamic blur threshold")
    p.add_argument("scores_csv", help="score CSV from `triage score`")
    p.add_argument("frames_dir", help="directory holding the scored frames")
    p.add_argument("-o", "--out-dir", default="filtered", help="output directory (default: %(default)s)")
    p.add_argument("--k", type=int, default=None,
                   help=f"blur window half-width in frames (default: {_DEFAULTS.k})")
    add_common(p)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("keyframes", help="reduce frames to representative keyframes")
    p.add_argument("frames_dir", help="directory of PNG/JPEG frames")
    p.add_argument("-o", "--output", default="keyframes.txt", help="keyframe listing path (default: %(default)s)")
    p.add_argument("--listing", help="ingest an external SLAM keyframe listing instead of selecting")
    p.add_argument("--similarity-threshold", type=float, default=None,
                   help=f"thumbnail mean-absolute-difference threshold (default: {_DEFAULTS.similarity_threshold})")
    p.add_argument("--min-gap", type=int, default=None,
                   help=f"minimum frames between keyframes (default: {_DEFAULTS.min_gap})")
    p.add_argument("--thumb-width", type=int, default=None,
                   help=f"comparison thumbnail width (default: {_DEFAULTS.thumb_width})")
    p.add_argument("--thumb-height", type=int, default=None,
                   help=f"comparison thumbnail height (default: {_DEFAULTS.thumb_height})")
    p.add_argument("--downscale", type=int, default=None,
                   help=f"integer downscale factor before thumbnailing (default: {_DEFAULTS.downscale})")
    add_common(p)
    p.set_defaults(func=cmd_keyframes)

    p = sub.add_parser("tour", help="build the panorama navigation graph from SfM output")
    p.add_argument("reconstruction", help="reconstruction.json from the SfM toolchain")
    p.add_argument("-o", "--output", default="tour.json", help="tour document path (default: %(default)s)")
    p.add_argument("--panos-dir", help="directory of panorama images; absent images are flagged")
    p.add_argument("--max-neighbors", type=int, default=None,
                   help=f"outgoing hotspots per panorama (default: {_DEFAULTS.max_neighbors})")
    p.add_argument("--max-distance", type=float, default=None,
                   help="drop neighbors beyond this distance (default: unlimited)")
    p.add_argument("--units", choices=["meters", "reconstruction"], default=None,
                   help=f"distance unit label (default: {_DEFAULTS.units})")
    add_common(p)
    p.set_defaults(func=cmd_tour)

    p = sub.add_parser("export-ply", help="export the sparse point cloud as ASCII PLY")
    p.add_argument("reconstruction", help="reconstruction.json from the SfM toolchain")
    p.add_argument("-o", "--output", default="points.ply", help="PLY path (default: %(default)s)")
    p.add_argument("--include-shots", action="store_true", help="append camera positions as green vertices")
    add_common(p)
    p.set_defaults(func=cmd_export_ply)

    return parser


def _config_for(args):
    cfg = resolve_config(args.config)
    overrides = {}
    for name in ("k", "downscale", "similarity_threshold", "min_gap", "thumb_width",
                 "thumb_height", "max_neighbors", "max_distance", "units", "lenient"):
        if hasattr(args, name):
            overrides[name] = getattr(args, name)
    return apply_overrides(cfg, **overrides)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        cfg = _config_for(args)
    except ConfigError as exc:
        return _fail(EXIT_EMPTY_INPUT, str(exc))
    try:
        return args.func(args, cfg)
    except (EmptySeries, EmptyModel) as exc:
        return _fail(EXIT_EMPTY_INPUT, str(exc))
    except InvalidImage as exc:
        return _fail(EXIT_DECODE, str(exc))
    except BadListing as exc:
        return _fail(EXIT_INCONSISTENT, str(exc))
    except TriageError as exc:
        return _fail(EXIT_EMPTY_INPUT, str(exc))


if __name__ == "__main__":
    sys.exit(main())
