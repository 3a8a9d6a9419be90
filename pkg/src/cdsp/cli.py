"""Command-line surface: analyze, paper-check, sweep, kernel."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction

import numpy as np

from . import debranges, dirichlet
from .errors import CdspError
from .measure import parse_measure
from .policy import NumericPolicy
from .report import (PipelineResult, analyze, reference_checks,
                     report_to_json)


def _load_measure_arg(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return arg


def _policy_from_args(args) -> NumericPolicy:
    policy = NumericPolicy()
    if getattr(args, "policy", None):
        with open(args.policy.lstrip("@"), "r", encoding="utf-8") as fh:
            policy = NumericPolicy.from_json(fh.read())
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "lmax", None) is not None:
        overrides["l_max"] = args.lmax
    if getattr(args, "ntrunc", None) is not None:
        overrides["N_trunc"] = args.ntrunc
    return replace(policy, **overrides) if overrides else policy


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def cmd_analyze(args) -> int:
    policy = _policy_from_args(args)
    try:
        rep = analyze(_load_measure_arg(args.measure), policy,
                      with_oracle=args.oracle,
                      exhaustive_psd=args.exhaustive_psd)
    except CdspError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    _emit(report_to_json(rep), args.out)
    return 0


def cmd_paper_check(args) -> int:
    weights = None
    if args.weights:
        weights = [float(w) for w in args.weights.split(",")]
    rep = reference_checks(rotation_turns=args.rotate, weights=weights)
    _emit(report_to_json(rep), args.out)
    for it in rep["items"]:
        print(f"{it['status']:>15}  {it['name']}", file=sys.stderr)
    return 0 if rep["all_passed"] else 1


def _sweep_cell(cell):
    theta2, theta3, w1, w2, w3 = cell
    row = {"theta2": str(theta2), "theta3": str(theta3),
           "w1": w1, "w2": w2, "w3": w3,
           "max_offdiag_norm": "", "verdict": "", "error": ""}
    try:
        spec = f"0,{theta2},{theta3}:{w1},{w2},{w3}"
        m = parse_measure(spec)
        res = PipelineResult(m, NumericPolicy())
        row["max_offdiag_norm"] = f"{res.verdict.max_offdiag_norm:.12e}"
        row["verdict"] = res.verdict.decision
    except CdspError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


SWEEP_COLUMNS = ["theta2", "theta3", "w1", "w2", "w3",
                 "max_offdiag_norm", "verdict", "error"]


def run_sweep(grid: int, weights, workers: int = 0) -> list:
    """One row per (theta2, theta3) pair on an equi-spaced rational grid of
    the given size; degenerate cells carry their error in-row."""
    w1, w2, w3 = weights
    cells = []
    for i in range(1, grid + 1):
        for j in range(1, grid + 1):
            cells.append((Fraction(i, grid + 1), Fraction(j, grid + 1),
                          w1, w2, w3))
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(c) for c in cells]
    return rows


def cmd_sweep(args) -> int:
    weights = (1.0, 1.0, 1.0)
    if args.weights:
        parts = [float(w) for w in args.weights.split(",")]
        if len(parts) != 3:
            print("sweep needs exactly three weights", file=sys.stderr)
            return 2
        weights = tuple(parts)
    rows = run_sweep(args.grid, weights, workers=args.workers)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    _emit(buf.getvalue(), args.out)
    flagged = [r for r in rows if r["verdict"] == "SubnormalNumeric"]
    for r in flagged:
        print(f"FLAG: SubnormalNumeric at theta2={r['theta2']} "
              f"theta3={r['theta3']}", file=sys.stderr)
    return 0


def _parse_point(text: str) -> complex:
    re_s, im_s = text.split(",")
    return complex(float(re_s), float(im_s))


def cmd_kernel(args) -> int:
    policy = _policy_from_args(args)
    z = _parse_point(args.z)
    lam = _parse_point(args.lam)
    if abs(z) >= 1 or abs(lam) >= 1:
        print("kernel evaluation requires |z| < 1 and |lam| < 1", file=sys.stderr)
        return 2
    try:
        m = parse_measure(_load_measure_arg(args.measure))
        res = PipelineResult(m, policy)
    except CdspError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    kt = dirichlet.kernel_omu(res.dd, z, lam)
    kp = dirichlet.kernel_perp(res.dd, z, lam)
    kb = debranges.kernel_KB(res.sd, z, lam)
    out = {
        "z": {"re": z.real, "im": z.imag},
        "lam": {"re": lam.real, "im": lam.imag},
        "K_subspace": {"re": kt.real, "im": kt.imag},
        "K_complement": {"re": kp.real, "im": kp.imag},
        "K_full": {"re": (kt + kp).real, "im": (kt + kp).imag},
        "K_B": {"re": kb.real, "im": kb.imag},
        "difference": abs(kt + kp - kb),
    }
    _emit(json.dumps(out, indent=2), args.out)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cdsp",
        description="Decide (numerically) whether the Cauchy dual of the "
                    "shift on a weighted Dirichlet space is subnormal.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--policy", help="@file.json numeric policy")
        p.add_argument("--seed", type=int, help="seed for random test vectors")
        p.add_argument("--lmax", type=int, help="positivity probe depth")
        p.add_argument("--ntrunc", type=int, help="truncation size for probes")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("analyze", help="full pipeline on one measure")
    p.add_argument("--measure", "-m", required=True,
                   help="inline 't1,t2,...:w1,w2,...' or @file.json")
    p.add_argument("--oracle", action="store_true",
                   help="also run the operator-level cross-check")
    p.add_argument("--exhaustive-psd", action="store_true",
                   help="do not short-circuit positivity probes")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("paper-check",
                       help="regression-check the closed-form constants of "
                            "the three equi-spaced atom example")
    p.add_argument("--rotate", help="rotate the measure by this many turns")
    p.add_argument("--weights", help="comma-separated weights (default 1,1,1)")
    common(p)
    p.set_defaults(func=cmd_paper_check)

    p = sub.add_parser("sweep", help="grid sweep over three-atom configurations")
    p.add_argument("--grid", type=int, default=12, help="angle grid size")
    p.add_argument("--weights", help="w1,w2,w3 (default 1,1,1)")
    p.add_argument("--workers", type=int, default=0, help="parallel workers")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("kernel", help="evaluate the reproducing kernels at a pair")
    p.add_argument("--measure", "-m", required=True)
    p.add_argument("--z", required=True, help="re,im of the first point")
    p.add_argument("--lam", required=True, help="re,im of the second point")
    common(p)
    p.set_defaults(func=cmd_kernel)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
