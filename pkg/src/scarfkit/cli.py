"""Command-line entry point: validate | plot | generate | confidence.

Exit codes: 0 ok, 1 data/selection error, 2 usage error. Flags override an
optional JSON config file, which overrides defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .export import build_export, write_export
from .ingest import (
    DEFAULT_WINDOW_MS,
    MissingHeaderError,
    parse_detections,
    parse_gaze_csv,
    synchronize,
    write_detections,
    write_gaze_csv,
)
from .mapping import DEFAULT_THRESHOLD_M, MODE_LIMIT, MODE_PAPER_LITERAL, MappingConfig, map_recording
from .model import validate_recording
from .render import EmptySelectionError, RenderConfig, render_confidence_panel, render_svg
from .scarf import VARIANTS, build, filter_labels, merge_runs, white_space_fraction
from .scenes import SCENE_IDS, builtin_scripts, generate, script_with

FATAL_ISSUE_CODES = {"MissingHeader"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scarfkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"scarfkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="JSON config file; flags take precedence")

    p_val = sub.add_parser("validate", parents=[common], help="check input files for issues")
    p_val.add_argument("--gaze", type=Path, required=True)
    p_val.add_argument("--detections", type=Path, required=True)
    p_val.add_argument("--window", type=int, default=None, help="sync window in ms")
    p_val.add_argument("--json", action="store_true", help="machine-readable report")

    p_plot = sub.add_parser("plot", parents=[common], help="build scarf plots and/or analysis export")
    p_plot.add_argument("--gaze", type=Path, required=True)
    p_plot.add_argument("--detections", type=Path, required=True)
    p_plot.add_argument("--variant", default=None, help="comma-separated: standard,depth,nn")
    p_plot.add_argument("--threshold", type=float, default=None, help="NN threshold in meters")
    p_plot.add_argument("--nn-mode", choices=[MODE_LIMIT, MODE_PAPER_LITERAL], default=None)
    p_plot.add_argument("--window", type=int, default=None, help="sync window in ms")
    p_plot.add_argument("--merge-runs", action="store_true", default=None)
    p_plot.add_argument("--filter-label", action="append", default=None, help="exclude a label (repeatable)")
    p_plot.add_argument("--out", type=Path, default=None, help="output path base (default: scarf)")
    p_plot.add_argument("--format", choices=["svg", "json", "both"], default=None)

    p_gen = sub.add_parser("generate", parents=[common], help="write a synthetic scene to disk")
    p_gen.add_argument("scene", help=f"one of {', '.join(SCENE_IDS)}")
    p_gen.add_argument("--seed", type=int, default=None)
    p_gen.add_argument("--sigma-deg", type=float, default=None, help="angular noise sigma in degrees")
    p_gen.add_argument("--out", type=Path, default=None, help="output directory")

    p_conf = sub.add_parser("confidence", parents=[common], help="render a confidence bar panel")
    p_conf.add_argument("--export", type=Path, required=True, help="analysis export JSON")
    p_conf.add_argument("--select", required=True, help="time selection t0:t1 in ms")
    p_conf.add_argument("--out", type=Path, default=None, help="output SVG (default: stdout)")

    return parser


def _apply_config_file(args: argparse.Namespace) -> None:
    """Fill argument values that were left at None from the config file."""
    path = getattr(args, "config", None)
    if path is None:
        return
    try:
        values = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"scarfkit: cannot read config {path}: {exc}")
    for key, value in values.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)


def _load_recording(args: argparse.Namespace) -> tuple:
    try:
        gaze_text = Path(args.gaze).read_text()
        det_text = Path(args.detections).read_text()
    except OSError as exc:
        print(f"scarfkit: {exc}", file=sys.stderr)
        raise SystemExit(1)
    try:
        samples, gaze_issues = parse_gaze_csv(gaze_text)
    except MissingHeaderError as exc:
        print(f"scarfkit: MissingHeader: {exc}", file=sys.stderr)
        raise SystemExit(1)
    detections, det_issues = parse_detections(det_text)
    window = args.window if getattr(args, "window", None) is not None else DEFAULT_WINDOW_MS
    recording = synchronize(samples, detections, window)
    return recording, gaze_issues + det_issues


def cmd_validate(args: argparse.Namespace) -> int:
    recording, parse_issues = _load_recording(args)
    issues = parse_issues + validate_recording(recording)
    if args.json:
        print(
            json.dumps(
                [
                    {"code": i.code, "message": i.message, "index": i.index}
                    for i in issues
                ]
            )
        )
    else:
        for issue in issues:
            print(f"{issue.code}: {issue.message}")
        print(f"{len(issues)} issues")
    return 0


def cmd_plot(args: argparse.Namespace) -> int:
    recording, _ = _load_recording(args)

    variants = (args.variant or "standard,depth,nn").split(",")
    for v in variants:
        if v not in VARIANTS:
            print(f"scarfkit: unknown variant {v!r}", file=sys.stderr)
            return 2

    excluded = set(args.filter_label or [])
    if excluded:
        recording, warnings_ = filter_labels(recording, excluded)
        for w in warnings_:
            print(f"warning: {w}", file=sys.stderr)

    config = MappingConfig(
        threshold_m=args.threshold if args.threshold is not None else DEFAULT_THRESHOLD_M,
        nn_mode=args.nn_mode or MODE_LIMIT,
        window_ms=args.window if args.window is not None else DEFAULT_WINDOW_MS,
    )
    if config.threshold_m <= 0:
        print("scarfkit: --threshold must be > 0", file=sys.stderr)
        return 2

    mappings = map_recording(recording, config)
    models = {v: build(recording, v, config, mappings) for v in variants}
    if args.merge_runs:
        models = {v: merge_runs(m) for v, m in models.items()}

    out_base = args.out or Path("scarf")
    fmt = args.format or "both"
    ordered = [models[v] for v in VARIANTS if v in models]
    written = []
    if fmt in ("svg", "both"):
        svg_path = out_base.with_suffix(".svg")
        svg_path.write_text(render_svg(ordered))
        written.append(str(svg_path))
    if fmt in ("json", "both"):
        json_path = out_base.with_suffix(".json")
        json_path.write_text(write_export(build_export(recording, models, mappings, config)))
        written.append(str(json_path))

    ws = white_space_fraction(next(iter(models.values())))
    print(
        f"samples: {len(recording.samples)}  aois: {len(recording.aois)}  "
        f"white space: {ws * 100:.1f}%"
    )
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_generate(args: argparse.Namespace) -> int:
    scripts = builtin_scripts()
    if args.scene not in scripts:
        print(
            f"scarfkit: unknown scene {args.scene!r}; expected one of {', '.join(SCENE_IDS)}",
            file=sys.stderr,
        )
        return 2
    script = scripts[args.scene]
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.sigma_deg is not None:
        overrides["noise_sigma_rad"] = args.sigma_deg * 3.141592653589793 / 180.0
    if overrides:
        script = script_with(script, **overrides)

    recording, truth = generate(script)
    out_dir = args.out or Path(f"scene_{args.scene}")
    out_dir.mkdir(parents=True, exist_ok=True)

    (out_dir / "gaze.csv").write_text(write_gaze_csv(list(recording.samples)))
    # re-derive the raw detection stream from the instances for byte-stable output
    from .ingest import Detection

    detections = []
    for aoi in recording.aois:
        for t, c in aoi.confidence_series:
            detections.append(Detection(t, aoi.instance_id, aoi.label, c, aoi.virtual, aoi.shape))
    detections.sort(key=lambda d: (d.timestamp_ms, d.instance_id))
    (out_dir / "detections.jsonl").write_text(write_detections(detections))
    (out_dir / "ground_truth.json").write_text(
        json.dumps(
            {
                "scene_id": script.scene_id,
                "seed": script.seed,
                "waypoint_names": list(truth.waypoint_names),
                "expected_labels": list(truth.expected_labels),
                "expected_hits": list(truth.expected_hits),
            },
            separators=(",", ":"),
        )
        + "\n"
    )
    print(f"wrote {out_dir}/gaze.csv, detections.jsonl, ground_truth.json")
    return 0


def cmd_confidence(args: argparse.Namespace) -> int:
    try:
        export = json.loads(Path(args.export).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"scarfkit: {exc}", file=sys.stderr)
        return 1
    try:
        t0_s, t1_s = args.select.split(":")
        t0, t1 = int(t0_s), int(t1_s)
    except ValueError:
        print("scarfkit: --select expects t0:t1 in ms", file=sys.stderr)
        return 2
    try:
        svg = render_confidence_panel(export, t0, t1)
    except EmptySelectionError as exc:
        print(f"scarfkit: EmptySelection: {exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(svg)
        print(f"wrote {args.out}")
    else:
        print(svg, end="")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    _apply_config_file(args)
    handlers = {
        "validate": cmd_validate,
        "plot": cmd_plot,
        "generate": cmd_generate,
        "confidence": cmd_confidence,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
