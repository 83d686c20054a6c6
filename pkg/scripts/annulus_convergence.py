"""Annulus-to-cone study: FE equilibrium versus the mesh placed exactly on the cone.

For each mesh the outer-strip bending energy is reported for
  * the exact cone configuration (nodes and directors mapped onto the cone), and
  * the computed equilibrium for each folding stiffness,
both relative to the closed-form cone energy.  The first column isolates the
element discretisation error; the rest add the effect of the boundary conditions.

Usage: python3 scripts/annulus_convergence.py [--mesh 32x4 --mesh 64x8] [--kf 0.1,0.5,1]
"""

import argparse

from orishell.benchmarks import AnnulusParams, cone_state, cone_theory_energy, gen_annulus_sector, outer_elements
from orishell.benchmarks.runners import ANNULUS_KF, ANNULUS_MESHES, annulus_case


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mesh", action="append", default=None, help="NxM, repeatable")
    ap.add_argument("--kf", default=",".join(map(str, ANNULUS_KF)))
    ap.add_argument("--cone-only", action="store_true", help="skip the equilibrium solves")
    args = ap.parse_args()
    meshes = [tuple(map(int, s.lower().split("x"))) for s in args.mesh] if args.mesh else list(ANNULUS_MESHES)
    kfs = [] if args.cone_only else [float(v) for v in args.kf.split(",")]

    print(f"{'mesh':>8} {'exact cone':>11}" + "".join(f" {'k_f=' + format(k, 'g'):>10}" for k in kfs))
    for n, m in meshes:
        p = AnnulusParams(n=n, m=m)
        scene = gen_annulus_sector(p)
        E_t = cone_theory_energy(p)
        exact = scene.model.bending_energy(cone_state(scene, p), outer_elements(p)) / E_t - 1
        cells = [f"{exact:+11.3%}"]
        for kf in kfs:
            d = annulus_case(n, m, kf)
            cells.append(f"{d['signed_error']:+10.3%}" if d["status"] == "completed" else f"{'failed':>10}")
        print(f"{n:>4}x{m:<3}" + " ".join(cells), flush=True)


if __name__ == "__main__":
    main()
