"""Run the three quantitative benchmarks and print a one-line summary for each.

Usage: python3 scripts/run_benchmarks.py --out results/ [--quick]

--quick restricts the annulus sweep to the 32x4 mesh.
"""

import argparse
import time
from pathlib import Path

from orishell.benchmarks.runners import ANNULUS_KF, ANNULUS_MESHES, bench_annulus, bench_cantilever, bench_miura


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--no-snapshots", action="store_true")
    args = ap.parse_args()
    snaps = not args.no_snapshots

    t = time.perf_counter()
    res = bench_miura(args.out / "miura", snapshots=snaps)
    worst = max(max(abs(r["H"] / r["H_analytic"] - 1), abs(r["W"] / r["W_analytic"] - 1)) for r in res.rows[1:])
    print(f"miura       completed={res.completed} rows={len(res.rows)} max rel (H, W) error {worst:.2e}  [{time.perf_counter() - t:.0f} s]")

    for nx, ny in ((10, 1), (40, 4)):
        t = time.perf_counter()
        res = bench_cantilever(args.out / f"cantilever_{nx}x{ny}", nx=nx, ny=ny, snapshots=snaps)
        worst = max(max(abs(r["u_tip"] / r["u_oracle"] - 1), abs(r["w_tip"] / r["w_oracle"] - 1)) for r in res.rows[1:])
        print(f"cantilever  {nx}x{ny} completed={res.completed} max rel tip error {worst:.2e}  [{time.perf_counter() - t:.0f} s]")

    t = time.perf_counter()
    meshes = ANNULUS_MESHES[:1] if args.quick else ANNULUS_MESHES
    res = bench_annulus(args.out / "annulus", meshes=meshes, kfs=ANNULUS_KF, snapshots=snaps)
    print(f"annulus     completed={res.completed}  [{time.perf_counter() - t:.0f} s]")
    for d in res.details:
        print(f"  {d['n']:4d}x{d['m']:<3d} k_f={d['k_f']:<4g} E_bend={d['E_bend']:.5e} E_theory={d['E_theory']:.5e} signed error {d['signed_error']:+.2%}")


if __name__ == "__main__":
    main()
