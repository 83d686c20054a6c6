"""Benchmark drivers: run a scene, collect curve rows, write CSV, snapshots and a summary."""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import io
from ..scene import Scene
from ..solver import Trajectory
from .annulus import AnnulusParams, cone_theory_energy, gen_annulus_sector, outer_elements
from .cantilever import CantileverConfig, elastica_oracle, gen_cantilever, tip_displacements
from .miura import MiuraParams, flat_length, gen_miura_unit, measure_miura, miura_analytic

ANNULUS_MESHES = ((32, 4), (64, 8), (128, 16))
ANNULUS_KF = (0.1, 0.5, 1.0)


@dataclass
class BenchResult:
    kind: str
    rows: list[dict]
    completed: bool
    details: list[dict] = field(default_factory=list)
    csv: Path | None = None


def max_workers(jobs: int) -> int:
    cap = os.environ.get("ORISHELL_THREADS")
    n = int(cap) if cap and cap.isdigit() and int(cap) > 0 else (os.cpu_count() or 1)
    return max(1, min(n, jobs))


def _summary(traj: Trajectory, runtime: float) -> dict:
    return {
        "status": traj.status,
        "error": None if traj.error is None else f"{type(traj.error).__name__}: {traj.error}",
        "accepted_increments": len(traj.records),
        "failed_increments": sum(not e.accepted for e in traj.events),
        "final_lambda": float(traj.records[-1].lam) if traj.records else 0.0,
        "runtime_s": round(runtime, 3),
    }


def run_scene(scene: Scene, snapshot_dir=None, every: int = 1) -> tuple[Trajectory, float]:
    """Run with optional VTK snapshots of the initial and every ``every``-th accepted state."""
    count = [0]
    if snapshot_dir is not None:
        io.write_snapshot(scene, np.zeros(scene.model.total_dofs), 0, snapshot_dir)

    def cb(rec):
        count[0] += 1
        if snapshot_dir is not None and count[0] % every == 0:
            io.write_snapshot(scene, rec.U, count[0], snapshot_dir)

    t = time.perf_counter()
    traj = scene.run(callback=cb)
    return traj, time.perf_counter() - t


# ---------------------------------------------------------------- miura


def miura_rows(scene: Scene, traj: Trajectory, p: MiuraParams) -> list[dict]:
    L_flat = flat_length(p)
    states = [(0.0, np.zeros(scene.model.total_dofs))] + [(r.lam, r.U) for r in traj.records]
    rows = []
    for lam, U in states:
        m = measure_miura(scene.model.node_positions(U), p)
        H_a, _, W_a = miura_analytic(p, m.beta)
        rows.append({"lambda": lam, "L/L_flat": m.L / L_flat, "H": m.H, "W": m.W, "H_analytic": H_a, "W_analytic": W_a})
    return rows


def bench_miura(out, increments: int = 100, snapshots: bool = True, every: int = 1) -> BenchResult:
    out = Path(out)
    p = MiuraParams()
    scene = gen_miura_unit(p, increments=increments)
    traj, rt = run_scene(scene, out / "miura_snapshots" if snapshots else None, every)
    rows = miura_rows(scene, traj, p)
    path = io.write_curves(rows, "miura", out / "miura.csv")
    io.write_summary(out / "miura_summary.json", {"benchmark": "miura", **_summary(traj, rt)})
    return BenchResult("miura", rows, traj.completed, csv=path)


# ---------------------------------------------------------------- annulus


def annulus_case(n: int, m: int, k_f: float, snapshot_dir=None) -> dict:
    """One sector run; returns the curve row plus diagnostics."""
    p = AnnulusParams(n=n, m=m)
    scene = gen_annulus_sector(p, k_f=k_f)
    t = time.perf_counter()
    traj = scene.run()
    rt = time.perf_counter() - t
    E_t = cone_theory_energy(p)
    U = traj.final_U if traj.completed else None
    E_b = scene.model.bending_energy(U, outer_elements(p)) if U is not None else float("nan")
    E_b_inner_rows = scene.model.bending_energy(U, outer_elements(p, True)) if U is not None else float("nan")
    if snapshot_dir is not None and U is not None:
        io.write_snapshot(scene, U, len(traj.records), Path(snapshot_dir) / f"{n}x{m}_kf{k_f:g}")
    return {
        "n": n,
        "m": m,
        "k_f": k_f,
        "E_bend": E_b,
        "E_bend_without_crease_row": E_b_inner_rows,
        "E_theory": E_t,
        "signed_error": (E_b - E_t) / E_t,
        **_summary(traj, rt),
    }


def _annulus_job(args):
    return annulus_case(*args)


def bench_annulus(out, meshes=ANNULUS_MESHES, kfs=ANNULUS_KF, snapshots: bool = True, workers=None) -> BenchResult:
    out = Path(out)
    jobs = [(n, m, kf, out / "annulus_snapshots" if snapshots else None) for n, m in meshes for kf in kfs]
    nw = workers or max_workers(len(jobs))
    if nw > 1:
        # largest meshes first so the pool drains evenly
        order = sorted(range(len(jobs)), key=lambda i: -jobs[i][0] * jobs[i][1])
        with ProcessPoolExecutor(nw) as ex:
            done = dict(zip(order, ex.map(_annulus_job, [jobs[i] for i in order])))
        details = [done[i] for i in range(len(jobs))]
    else:
        details = [_annulus_job(j) for j in jobs]
    ok = [d for d in details if d["status"] == "completed"]
    rows = [
        {
            "mesh_density": d["n"] * 2 * d["m"],
            "k_f": d["k_f"],
            "E_bend": d["E_bend"],
            "E_theory": d["E_theory"],
            "rel_error": abs(d["signed_error"]),
        }
        for d in ok
    ]
    path = io.write_curves(rows, "annulus", out / "annulus.csv")
    io.write_summary(out / "annulus_summary.json", {"benchmark": "annulus", "runs": details})
    return BenchResult("annulus", rows, len(ok) == len(details), details, path)


# ---------------------------------------------------------------- cantilever


def bench_cantilever(out, nx: int = 10, ny: int = 1, snapshots: bool = True, every: int = 1) -> BenchResult:
    out = Path(out)
    cfg = CantileverConfig(nx=nx, ny=ny)
    scene = gen_cantilever(cfg)
    traj, rt = run_scene(scene, out / "cantilever_snapshots" if snapshots else None, every)
    rows = [{"P": 0.0, "u_tip": 0.0, "w_tip": 0.0, "u_oracle": 0.0, "w_oracle": 0.0}]
    for r in traj.records:
        P = r.lam * cfg.total_load
        u, w = tip_displacements(scene, r.U)
        uo, wo = elastica_oracle(P, cfg.EI, cfg.length)
        rows.append({"P": P, "u_tip": u, "w_tip": w, "u_oracle": uo, "w_oracle": wo})
    path = io.write_curves(rows, "cantilever", out / "cantilever.csv")
    io.write_summary(out / "cantilever_summary.json", {"benchmark": "cantilever", "mesh": [nx, ny], **_summary(traj, rt)})
    return BenchResult("cantilever", rows, traj.completed, csv=path)
