"""Command-line entry point ``smean``.

Subcommands::

    smean phantom     --config run.yaml --out truth.vol
    smean forward     --config run.yaml --out means.vol
    smean reconstruct --config run.yaml [--means means.vol] --out recon.vol [--pgm slice.pgm]
    smean verify      [--n 4] [--seed 0] [--threads 1] --out checks.csv
    smean metrics     recon.vol truth.vol [--out metrics.csv]

Any failure prints ``error: <message>`` to stderr and exits with status 1
(2 for malformed command lines).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .config import RunConfig, load_config
from .io import REPORT_HEADER, export_slice_pgm, read_volume, report_rows, write_csv, write_volume
from .metrics import INTERIOR_RADIUS, METRIC_NAMES, compare_volumes
from .pipeline import render_phantom, run_forward, run_reconstruct
from .verification import ALL_CHECKS, VerifyConfig, run_all

__all__ = ["main", "build_parser"]

log = logging.getLogger("smean")


def _load(args) -> RunConfig:
    if not args.config:
        raise ValueError("--config is required for this subcommand")
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    if args.n is not None and args.n != cfg.n:
        raise ValueError(f"--n {args.n} contradicts the configured dimension {cfg.n}")
    return cfg


def _out_path(args, cfg: RunConfig | None, default: str) -> str:
    if args.out:
        path = args.out
    else:
        base = cfg.output_dir if cfg is not None else "."
        path = os.path.join(base, default)
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    return path


def cmd_phantom(args) -> int:
    cfg = _load(args)
    path = _out_path(args, cfg, "phantom.vol")
    write_volume(path, render_phantom(cfg))
    print(path)
    return 0


def cmd_forward(args) -> int:
    cfg = _load(args)
    path = _out_path(args, cfg, "means.vol")
    write_volume(path, run_forward(cfg))
    print(path)
    return 0


def cmd_reconstruct(args) -> int:
    cfg = _load(args)
    data = read_volume(args.means).to_mean_data() if args.means else None
    image = run_reconstruct(cfg, data)
    path = _out_path(args, cfg, "recon.vol")
    write_volume(path, image)
    if args.pgm:
        export_slice_pgm(image, args.pgm, axis=args.axis, index=args.index)
    dropped = image.diagnostics.get("dropped_nodes", 0)
    if dropped:
        log.warning("%d interior nodes lacked a full Laplacian stencil", dropped)
    print(path)
    return 0


def cmd_verify(args) -> int:
    dims = None if args.n is None else (args.n,)
    checks = tuple(args.checks.split(",")) if args.checks else ALL_CHECKS
    unknown = [c for c in checks if c not in ALL_CHECKS]
    if unknown:
        raise ValueError(f"unknown check(s) {unknown}; choose from {ALL_CHECKS}")
    cfg = VerifyConfig(checks=checks, dims=dims, seed=args.seed or 0, threads=args.threads or 1,
                       tolerance_scale=args.tolerance_scale)
    reports = run_all(cfg)
    for r in reports:
        print(r)
    path = _out_path(args, None, "checks.csv")
    write_csv(path, REPORT_HEADER, report_rows(reports))
    failed = [r.name for r in reports if not r.passed]
    if failed and args.strict:
        raise RuntimeError(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    return 0


def cmd_metrics(args) -> int:
    image = read_volume(args.volume)
    reference = read_volume(args.reference)
    if image.values.shape != reference.values.shape:
        raise ValueError(f"volume shapes differ: {image.values.shape} vs {reference.values.shape}")
    mask = interior = None
    carrier = reference if reference.semi_axes is not None else image
    if carrier.semi_axes is not None and carrier.payload != "means":
        grid = carrier.grid()
        mask = grid.mask
        interior = mask & (grid.normalized_radius() < INTERIOR_RADIUS)
    metrics = compare_volumes(image.values, reference.values, mask, interior)
    rows = [[name, repr(metrics[name])] for name in METRIC_NAMES]
    for name, value in rows:
        print(f"{name} {value}")
    if args.out:
        write_csv(_out_path(args, None, "metrics.csv"), ["metric", "value"], rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--out", help="output file")
    common.add_argument("--n", type=int, help="dimension (checked against the config; "
                                              "restricts 'verify' to one dimension)")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="smean",
                                     description="Spherical means with centres on an ellipsoid.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", parents=[common], help="render the ground-truth phantom")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("forward", parents=[common], help="sample the spherical means")
    p.set_defaults(func=cmd_forward)

    p = sub.add_parser("reconstruct", parents=[common], help="run the inversion")
    p.add_argument("--means", help="mean data volume (default: compute from the config)")
    p.add_argument("--pgm", help="also write a PGM slice of the result")
    p.add_argument("--axis", type=int, help="slice axis for 3-D volumes")
    p.add_argument("--index", type=int, help="slice index for 3-D volumes")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", parents=[common], help="run the identity checks")
    p.add_argument("--checks", help=f"comma-separated subset of {','.join(ALL_CHECKS)}")
    p.add_argument("--tolerance-scale", type=float, default=1.0)
    p.add_argument("--strict", action="store_true", help="exit nonzero if a check fails")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metrics", parents=[common], help="compare two volumes")
    p.add_argument("volume")
    p.add_argument("reference")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads is not None and args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except Exception as exc:  # every stage error becomes a nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
