"""Command-line front end.

Subcommands: ``verify`` runs the full check suite for one shape,
``tables`` prints the two detection tables, ``run`` simulates seeded
shots for one label, ``classify`` decodes a pair of outcome tuples.
Output is markdown by default or JSON with --format json; exit codes are
0 on success, 1 on verification or resource failure, 2 on usage errors.

OAM levels render as letters a, b, c, ... when d allows it and spatial
levels as digits, so the d=3 tables can be compared by eye.  The dense
amplitude cap can be set per call with --dense-cap or globally with the
HYPERGHZ_DENSE_CAP environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import GhzLabel
from .protocol import Outcome, decode_parity, decode_phase, sample_records
from .state import CapExceededError, SystemShape
from .verify import VerificationReport, parity_detection_table, phase_detection_table, verify_shape

ENV_DENSE_CAP = "HYPERGHZ_DENSE_CAP"


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def _parse_levels(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"could not parse levels {text!r}; expected e.g. 0,0,1")


def _parse_label(text: str, shape: SystemShape) -> GhzLabel:
    if ":" not in text:
        raise ValueError(f"label {text!r} must look like x_1,...,x_{{n-1}}:k")
    x_part, _, k_part = text.rpartition(":")
    label = GhzLabel(_parse_levels(x_part), int(k_part))
    label.validate(shape)
    return label


def _render_levels(levels: tuple[int, ...], d: int, letters: bool) -> str:
    if letters and d <= 26:
        return "".join(chr(ord("a") + lv) for lv in levels)
    if d <= 10:
        return "".join(str(lv) for lv in levels)
    return ",".join(str(lv) for lv in levels)


def _render_label(label: GhzLabel) -> str:
    # mirrors the --label flag syntax so output can be fed back in
    return ",".join(str(v) for v in label.x) + f":{label.k}"


def _resolve_dense_cap(args) -> int | None:
    if getattr(args, "dense_cap", None) is not None:
        return args.dense_cap
    env = os.environ.get(ENV_DENSE_CAP)
    return int(env) if env else None


def _tables_payload(shape: SystemShape) -> dict:
    parity = parity_detection_table(shape)
    phase = phase_detection_table(shape)
    return {
        "dim": shape.d,
        "photons": shape.n,
        "parity_table": {
            _render_levels(x, shape.d, letters=False): sorted(
                _render_levels(levels, shape.d, letters=True) for levels in outcomes
            )
            for x, outcomes in sorted(parity.items())
        },
        "phase_table": {
            str(k): sorted(
                _render_levels(levels, shape.d, letters=False) for levels in outcomes
            )
            for k, outcomes in sorted(phase.items())
        },
    }


def _print_tables_markdown(payload: dict) -> None:
    print(f"## parity detections (d={payload['dim']}, photons={payload['photons']})")
    print("| initial class | possible OAM detections |")
    print("| --- | --- |")
    for x, outcomes in payload["parity_table"].items():
        print(f"| x={x} (any k) | {', '.join(outcomes)} |")
    print()
    print(f"## phase detections (d={payload['dim']}, photons={payload['photons']})")
    print("| phase index | possible spatial detections |")
    print("| --- | --- |")
    for k, outcomes in payload["phase_table"].items():
        print(f"| k={k} (any x) | {', '.join(outcomes)} |")


def _report_payload(report: VerificationReport) -> dict:
    shape = report.shape
    payload = {
        "dim": shape.d,
        "photons": shape.n,
        "labels": shape.d**shape.n,
        "passed": report.passed,
        "checks": [
            {
                "name": c.name,
                "passed": c.passed,
                "skipped": c.skipped,
                "worst_deviation": c.worst_deviation,
                "runtime_s": c.runtime_s,
                "detail": c.detail,
            }
            for c in report.checks
        ],
    }
    tables = _tables_payload(shape)
    payload["parity_table"] = tables["parity_table"]
    payload["phase_table"] = tables["phase_table"]
    return payload


def cmd_verify(args) -> int:
    shape = SystemShape(args.dim, args.photons)
    report = verify_shape(shape, dense_cap=_resolve_dense_cap(args), jobs=args.jobs)
    if args.format == "json":
        print(json.dumps(_report_payload(report), indent=2))
        return 0 if report.passed else 1
    print(f"# verification report (d={shape.d}, photons={shape.n})")
    print(f"labels: {shape.d ** shape.n}")
    print()
    print("| check | status | worst deviation | runtime (s) |")
    print("| --- | --- | --- | --- |")
    for c in report.checks:
        status = "skipped" if c.skipped else ("pass" if c.passed else "FAIL")
        note = f" ({c.detail})" if c.detail else ""
        print(f"| {c.name} | {status}{note} | {_fmt(c.worst_deviation)} | {_fmt(c.runtime_s)} |")
    print()
    print(f"overall: {'PASS' if report.passed else 'FAIL'}")
    print()
    _print_tables_markdown(_tables_payload(shape))
    return 0 if report.passed else 1


def cmd_tables(args) -> int:
    shape = SystemShape(args.dim, args.photons)
    payload = _tables_payload(shape)
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        _print_tables_markdown(payload)
    return 0


def cmd_run(args) -> int:
    shape = SystemShape(args.dim, args.photons)
    if args.label is None:
        raise ValueError("run requires --label x_1,...,x_{n-1}:k")
    if args.shots < 1:
        raise ValueError("--shots must be at least 1")
    label = _parse_label(args.label, shape)
    records = sample_records(shape, label, args.shots, args.seed)
    matches = sum(1 for r in records if r.decoded == label)
    accuracy = matches / len(records)
    if args.format == "json":
        payload = {
            "dim": shape.d,
            "photons": shape.n,
            "label": {"x": list(label.x), "k": label.k},
            "records": [
                {
                    "oam": list(r.oam_outcome.levels),
                    "spatial": list(r.spatial_outcome.levels),
                    "decoded": {"x": list(r.decoded.x), "k": r.decoded.k},
                    "match": r.decoded == label,
                }
                for r in records
            ],
            "accuracy": accuracy,
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"# run: d={shape.d}, photons={shape.n}, label={_render_label(label)}, "
          f"shots={args.shots}, seed={args.seed}")
    for i, r in enumerate(records, start=1):
        oam = _render_levels(r.oam_outcome.levels, shape.d, letters=True)
        spatial = _render_levels(r.spatial_outcome.levels, shape.d, letters=False)
        decoded = _render_label(r.decoded)
        match = "yes" if r.decoded == label else "NO"
        print(f"shot {i}: oam={oam} spatial={spatial} decoded={decoded} match={match}")
    print(f"accuracy: {_fmt(accuracy)} ({matches}/{len(records)})")
    return 0


def cmd_classify(args) -> int:
    shape = SystemShape(args.dim, args.photons)
    if args.oam is None or args.spatial is None:
        raise ValueError("classify requires both --oam and --spatial")
    oam_levels = _parse_levels(args.oam)
    spatial_levels = _parse_levels(args.spatial)
    for levels in (oam_levels, spatial_levels):
        shape.validate_levels(levels, shape.n)
    x = decode_parity(Outcome("oam", oam_levels), shape.d)
    k = decode_phase(Outcome("spatial", spatial_levels), shape.d)
    if args.format == "json":
        payload = {
            "dim": shape.d,
            "photons": shape.n,
            "oam": list(oam_levels),
            "spatial": list(spatial_levels),
            "decoded": {"x": list(x), "k": k},
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"x: {','.join(str(v) for v in x)}")
    print(f"k: {k}")
    print(f"label: {_render_label(GhzLabel(x, k))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperghz",
        description="Simulate and verify complete qudit GHZ-state sorting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, dim=3, photons=3):
        p.add_argument("--dim", type=int, default=dim, help="qudit dimension d")
        p.add_argument("--photons", type=int, default=photons, help="photon count n")
        p.add_argument(
            "--format", choices=("markdown", "json"), default="markdown"
        )
        p.add_argument(
            "--dense-cap",
            type=int,
            default=None,
            help=f"dense amplitude cap (or set {ENV_DENSE_CAP})",
        )

    p_verify = sub.add_parser("verify", help="run all checks for one shape")
    add_common(p_verify)
    p_verify.add_argument("--jobs", type=int, default=1, help="parallel label checks")
    p_verify.set_defaults(fn=cmd_verify)

    p_tables = sub.add_parser("tables", help="print the two detection tables")
    add_common(p_tables)
    p_tables.set_defaults(fn=cmd_tables)

    p_run = sub.add_parser("run", help="simulate seeded shots for one label")
    add_common(p_run)
    p_run.add_argument("--label", help="input label, e.g. 0,1:2")
    p_run.add_argument("--shots", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.set_defaults(fn=cmd_run)

    p_classify = sub.add_parser("classify", help="decode an outcome pair")
    add_common(p_classify)
    p_classify.add_argument("--oam", help="OAM outcome levels, e.g. 0,0,1")
    p_classify.add_argument("--spatial", help="spatial outcome levels, e.g. 0,0,2")
    p_classify.set_defaults(fn=cmd_classify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
