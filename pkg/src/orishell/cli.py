"""Command-line driver: ``simulate``, ``bench`` and ``check``.

Exit codes: 0 success, 1 usage or input error, 2 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import OrishellError, ParseError, ValidationError

BENCHES = ("miura", "annulus", "cantilever", "all")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="orishell", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="run a scene file")
    s.add_argument("scene", type=Path, help="JSON scene file")
    s.add_argument("--out", type=Path, required=True, help="output directory")
    s.add_argument("--increments", type=int, help="override solver.max_increments")
    s.add_argument("--tol", type=float, help="override the displacement-norm tolerance")
    s.add_argument("--max-iters", type=int, help="override solver.max_iterations")
    s.add_argument("--snapshots", type=int, metavar="EVERY", help="write a snapshot every EVERY accepted increments")
    s.add_argument("--verbose", action="store_true", help="print one progress line per increment")

    b = sub.add_parser("bench", help="run a quantitative benchmark")
    b.add_argument("name", choices=BENCHES)
    b.add_argument("--out", type=Path, required=True, help="output directory")
    b.add_argument("--mesh", action="append", metavar="NxM", help="annulus n x m or cantilever nx x ny; repeatable")
    b.add_argument("--kf", help="comma-separated folding stiffnesses for the annulus")
    b.add_argument("--no-snapshots", action="store_true", help="skip VTK output")

    c = sub.add_parser("check", help="run the derivative and property self-checks")
    c.add_argument("--quick", action="store_true", help="20 random states instead of 100")
    return ap


def _mesh_arg(text: str) -> tuple[int, int]:
    try:
        a, b = text.lower().split("x")
        n, m = int(a), int(b)
    except ValueError:
        raise ValidationError(f"--mesh {text!r}: expected NxM") from None
    if n < 1 or m < 1:
        raise ValidationError(f"--mesh {text!r}: positive sizes required")
    return n, m


def _kf_arg(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ValidationError(f"--kf {text!r}: expected comma-separated numbers") from None
    if not all(v >= 0 and np.isfinite(v) for v in vals):
        raise ValidationError("--kf: non-negative finite values required")
    return vals


def cmd_simulate(args) -> int:
    from .benchmarks.runners import _summary, run_scene

    scene = io.parse_scene(args.scene)
    changes = {}
    if args.increments is not None:
        changes["max_increments"] = args.increments
    if args.tol is not None:
        changes["tolerance"] = args.tol
    if args.max_iters is not None:
        changes["max_iterations"] = args.max_iters
    if args.verbose:
        changes["verbose"] = True
    try:
        scene = scene.with_solver(**changes)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    every = args.snapshots if args.snapshots is not None else scene.outputs.every
    if every < 1:
        raise ValidationError("--snapshots: positive integer required")
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    traj, rt = run_scene(scene, out / "snapshots", every)

    track = scene.outputs.track_nodes
    header = ["lambda", "energy", "element_energy", "crease_energy", "iterations"]
    header += [f"{c}_{n}" for n in track for c in ("u", "v", "w")]
    with (out / "curves.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        trans = scene.model.dofmap.trans
        for r in traj.records:
            disp = r.U[trans[track]].ravel() if track else []
            w.writerow([repr(float(v)) for v in (r.lam, r.energy, r.element_energy, r.crease_energy)] + [r.iterations] + [repr(float(v)) for v in disp])
    io.write_summary(out / "summary.json", {"scene": scene.name, **_summary(traj, rt)})
    if not traj.completed:
        print(f"solver failure: {traj.error}", file=sys.stderr)
        return 2
    print(f"{scene.name}: completed in {len(traj.records)} increments -> {out}")
    return 0


def cmd_bench(args) -> int:
    from .benchmarks import runners

    meshes = [_mesh_arg(m) for m in args.mesh] if args.mesh else None
    kfs = _kf_arg(args.kf) if args.kf else None
    names = ["miura", "annulus", "cantilever"] if args.name == "all" else [args.name]
    snaps = not args.no_snapshots
    ok = True
    for name in names:
        out = args.out / name if args.name == "all" else args.out
        out.mkdir(parents=True, exist_ok=True)
        if name == "miura":
            res = runners.bench_miura(out, snapshots=snaps)
        elif name == "annulus":
            res = runners.bench_annulus(out, meshes or runners.ANNULUS_MESHES, kfs or runners.ANNULUS_KF, snapshots=snaps)
        else:
            nx, ny = (meshes or [(10, 1)])[0]
            res = runners.bench_cantilever(out, nx, ny, snapshots=snaps)
        ok &= res.completed
        print(f"{name}: {'completed' if res.completed else 'FAILED'} -> {res.csv}")
    if not ok:
        print("solver failure in at least one run; see the summary files", file=sys.stderr)
        return 2
    return 0


def cmd_check(args) -> int:
    from .checks import run_all

    results = run_all(quick=args.quick)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 2


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_check(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OrishellError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
