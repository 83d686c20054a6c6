"""Numerical self-checks: derivative consistency, invariance, crease law, solver recovery, patch test.

Each check returns a :class:`CheckResult`; ``run_all`` backs the ``check``
command and the acceptance tests call the same functions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .assembly import BoundaryConditions, Model
from .crease import CreaseParams, crease_contribution, crease_density_derivatives, fold_angle
from .element import ElementBatch
from .errors import SingularSystem
from .mesh import CreaseSpec, Material, build_mesh, default_barriers
from .solver import SolverConfig, linear_solve, run, state_digest


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.value:.3e} (tol {self.tolerance:.1e}) {self.detail}".rstrip()


def _rel(a, b):
    return float(np.abs(a - b).max() / max(np.abs(b).max(), 1e-300))


def central_gradient(f, x, step):
    """Central differences with a per-coordinate step."""
    x = np.asarray(x, float)
    step = np.broadcast_to(step, x.shape)
    g = None
    for i in range(x.size):
        e = np.zeros_like(x)
        e.flat[i] = step.flat[i]
        d = (np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2 * step.flat[i])
        if g is None:
            g = np.empty((x.size,) + d.shape)
        g[i] = d
    return g


# ---------------------------------------------------------------- random states


def random_element(rng: np.random.Generator):
    """A distorted flat quad in a random orientation, its directors and a displacement."""
    size = rng.uniform(0.5, 2.0)
    base = np.array([[-1, -1], [1, -1], [1, 1], [-1, 1]], float) * 0.5 * size
    X2 = base + rng.uniform(-0.15, 0.15, (4, 2)) * size
    h = rng.uniform(0.02, 0.2) * size
    R = Rotation.random(random_state=rng).as_matrix()
    X_o = np.c_[X2, np.zeros(4)] @ R.T
    X_n = np.tile(R[:, 2] * 0.5 * h, (4, 1))
    mat = Material(rng.uniform(0.5, 2.0), rng.uniform(0.0, 0.45), h)
    u = np.concatenate([rng.normal(0, 0.1 * size, (4, 3)), rng.normal(0, 0.2 * h, (4, 3))]).ravel()
    return X_o, X_n, mat, u


def random_crease(rng: np.random.Generator):
    """Crease vectors [x1, x2, p1, p2, q1, q2] with a random fold and parameters."""
    ell = rng.uniform(0.5, 2.0)
    h = rng.uniform(0.01, 0.2)
    R = Rotation.random(random_state=rng).as_matrix()
    th = rng.uniform(-2.8, 2.8, 2)
    axis = np.array([1.0, 0.0, 0.0])
    up = np.array([0.0, 0.0, 1.0])
    rot = lambda t: Rotation.from_rotvec(t * axis).as_matrix()
    y = np.zeros((6, 3))
    y[1] = ell * axis
    y[2] = y[3] = 0.5 * h * up
    y[4] = 0.5 * h * rot(th[0]) @ up
    y[5] = 0.5 * h * rot(th[1]) @ up
    y += rng.normal(0, 0.02, (6, 3)) * np.r_[[ell] * 2, [h] * 4][:, None]
    y = y @ R.T + rng.normal(0, 1.0, 3) * np.r_[1, 1, 0, 0, 0, 0][:, None]
    t0 = rng.uniform(-2.0, 2.0)
    tl, tr = default_barriers(t0)
    tl, tr = rng.uniform(tl, t0), rng.uniform(t0, tr)
    params = CreaseParams(*(np.array([v]) for v in (rng.uniform(0.1, 2.0), t0, tl, tr, ell)))
    return y, params, h


# ---------------------------------------------------------------- derivative checks


def check_element_derivatives(n: int = 100, seed: int = 0, grad_tol=1e-6, hess_tol=1e-5) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    gw = hw = 0.0
    for _ in range(n):
        X_o, X_n, mat, u = random_element(rng)
        batch = ElementBatch(X_o[None], X_n[None], mat)
        scale = np.r_[np.full(12, np.abs(X_o).max()), np.full(12, mat.h)]
        step = 1e-5 * scale
        _, g, H = batch.force_stiffness(u[None])
        g_fd = central_gradient(lambda v: batch.energy(v[None])[0], u, step)
        H_fd = central_gradient(lambda v: batch.force_stiffness(v[None], hessian=False)[1][0], u, step)
        gw = max(gw, _rel(g[0], g_fd))
        hw = max(hw, _rel(H[0], H_fd))
    return [
        CheckResult(f"element gradient vs FD ({n} states)", gw <= grad_tol, gw, grad_tol),
        CheckResult(f"element Hessian vs FD ({n} states)", hw <= hess_tol, hw, hess_tol),
    ]


def check_crease_derivatives(n: int = 100, seed: int = 1, grad_tol=1e-6, hess_tol=1e-5) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    gw = hw = 0.0
    for _ in range(n):
        y, params, h = random_crease(rng)
        scale = np.r_[np.full(6, np.abs(y[:2]).max()), np.full(12, h)]
        step = 1e-6 * scale
        f = lambda v: crease_contribution(v.reshape(1, 6, 3), params, h)
        _, g, H = f(y.ravel())
        g_fd = central_gradient(lambda v: f(v)[0][0], y.ravel(), step)
        H_fd = central_gradient(lambda v: f(v)[1][0], y.ravel(), step)
        gw = max(gw, _rel(g[0], g_fd))
        hw = max(hw, _rel(H[0], H_fd))
    return [
        CheckResult(f"crease gradient vs FD ({n} states)", gw <= grad_tol, gw, grad_tol),
        CheckResult(f"crease Hessian vs FD ({n} states)", hw <= hess_tol, hw, hess_tol),
    ]


def two_panel_model(k_f: float = 0.5, theta0: float = 0.3) -> Model:
    nodes = [[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0], [1, 1, 0], [2, 1, 0]]
    quads = [[0, 1, 4, 3], [1, 2, 5, 4]]
    mesh = build_mesh(nodes, quads, [0, 1], [CreaseSpec(1, 4, k_f, theta0)], Material(1.0, 0.3, 0.05))
    return Model(mesh)


def check_assembled_symmetry(seed: int = 2, tol: float = 1e-12) -> CheckResult:
    rng = np.random.default_rng(seed)
    model = two_panel_model()
    worst = 0.0
    for _ in range(10):
        U = rng.normal(0, 0.05, model.total_dofs)
        K = model.assemble(U).K.toarray()
        worst = max(worst, np.abs(K - K.T).max() / np.abs(K).max())
    return CheckResult("assembled K symmetry", worst <= tol, worst, tol)


# ---------------------------------------------------------------- invariance


def rigid_motion(model: Model, U: np.ndarray, R: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Displacement of the state U after the rigid motion x -> R x + c (directors rotate)."""
    dm = model.dofmap
    x = model.reference + U
    out = x.copy()
    out[dm.trans] = x[dm.trans] @ R.T + c
    out[dm.dirs] = x[dm.dirs] @ R.T
    return out - model.reference


def check_invariance(scenes, seed: int = 3, tol: float = 1e-10) -> list[CheckResult]:
    """``scenes`` yields (label, model, U); energies compared against E h Area."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for label, model, U in scenes:
        mat = model.mesh.material
        scale = mat.E * mat.h * model.mesh.area()
        E0 = model.energy(U)
        for _ in range(3):
            R = Rotation.random(random_state=rng).as_matrix()
            c = rng.normal(0, 10.0, 3)
            worst = max(worst, abs(model.energy(rigid_motion(model, U, R, c)) - E0) / scale)
            worst = max(worst, abs(model.energy(rigid_motion(model, U, np.eye(3), c)) - E0) / scale)
    res = [CheckResult("energy under rigid translation/rotation", worst <= tol, worst, tol, "relative to E*h*Area")]

    tw = aw = 0.0
    for _ in range(100):
        p, q, ax = rng.normal(size=(3, 3))
        R = Rotation.random(random_state=rng).as_matrix()
        t = fold_angle(p, q, ax)
        tw = max(tw, abs(fold_angle(R @ p, R @ q, R @ ax) - t))
        aw = max(aw, abs(fold_angle(q, p, ax) + t))
    res.append(CheckResult("fold angle under rigid rotation", tw <= 1e-12, tw, 1e-12))
    res.append(CheckResult("fold angle antisymmetry under panel swap", aw <= 1e-12, aw, 1e-12))
    return res


# ---------------------------------------------------------------- crease law


def check_crease_law(tol: float = 1e-10) -> list[CheckResult]:
    """C1 continuity at the barrier angles and monotonicity outside them, on a parameter grid."""
    cw = 0.0
    mono = True
    for t0 in np.linspace(-2.5, 2.5, 11):
        dl, dr = default_barriers(t0)
        for fl in (0.2, 0.6, 1.0):
            for fr in (0.2, 0.6, 1.0):
                tl = t0 + fl * (dl - t0)
                tr = t0 + fr * (dr - t0)
                prm = CreaseParams(np.array(0.7), np.array(t0), np.array(tl), np.array(tr), np.array(1.0))
                for edge in (tl, tr):
                    below = np.nextafter(edge, -np.inf)
                    above = np.nextafter(edge, np.inf)
                    v = crease_density_derivatives(np.array([below, above]), prm)
                    # limits from each side: the quadratic core and the barrier evaluated at the edge
                    cw = max(cw, abs(v[0][1] - v[0][0]), abs(v[1][1] - v[1][0]))
                th = np.linspace(tr, np.pi - 1e-3, 400)[1:]
                mono &= bool(np.all(np.diff(crease_density_derivatives(th, prm)[0]) > 0))
                th = np.linspace(-np.pi + 1e-3, tl, 400)[:-1]
                mono &= bool(np.all(np.diff(crease_density_derivatives(th, prm)[0]) < 0))
    return [
        CheckResult("crease density C1 at barrier angles", cw <= tol, cw, tol),
        CheckResult("crease density monotone outside barriers", mono, 0.0 if mono else 1.0, 0.0),
    ]


# ---------------------------------------------------------------- solver recovery


class FailingSolver:
    """Linear solver that raises SingularSystem for its first ``failures`` calls."""

    def __init__(self, failures: int = 3):
        self.left = failures

    def __call__(self, K, r):
        if self.left > 0:
            self.left -= 1
            raise SingularSystem("injected failure")
        return linear_solve(K, r)


def check_recovery_sequence() -> list[CheckResult]:
    model = two_panel_model(k_f=0.5, theta0=0.0)
    dm = model.dofmap
    fixed = np.concatenate([dm.trans[[0, 3]].ravel(), dm.node_director_dofs(0).ravel(), dm.node_director_dofs(3).ravel()])
    F = np.zeros(model.total_dofs)
    F[dm.trans[[2, 5], 2]] = 1e-9
    bcs = BoundaryConditions(fixed=fixed, F_ext=F)
    traj = run(model, bcs, SolverConfig(max_increments=4), linear_solver=FailingSolver(3))
    failed = [e for e in traj.events if not e.accepted][:3]
    alphas = [e.alpha for e in failed]
    ok_alpha = alphas == [0.5, 0.25, 0.125] and [e.gamma for e in failed] == [1, 2, 3] and all(e.beta == 1.0 for e in failed)
    zero = state_digest(np.zeros(model.total_dofs))
    ok_rollback = all(e.state_digest == zero for e in failed)
    first_ok = next(e for e in traj.events if e.accepted)
    ok_after = abs(first_ok.alpha - 0.1375) < 1e-15 and first_ok.gamma == 0 and first_ok.beta == 1.0
    return [
        CheckResult("recovery alpha sequence 1 -> 0.5 -> 0.25 -> 0.125", ok_alpha, 0.0 if ok_alpha else 1.0, 0.0, str(alphas)),
        CheckResult("rollback restores U bit-exactly", ok_rollback, 0.0 if ok_rollback else 1.0, 0.0),
        CheckResult("accepted step grows alpha by 1.1 and resets beta, gamma", ok_after and traj.completed, 0.0 if ok_after else 1.0, 0.0),
    ]


# ---------------------------------------------------------------- patch test


def distorted_patch(material: Material = Material(1e6, 0.3, 0.01)):
    nodes = np.array([[0, 0, 0], [1, 0, 0], [2, 0, 0], [0, 1, 0], [1.15, 0.8, 0], [2, 1, 0], [0, 2, 0], [1, 2, 0], [2, 2, 0]], float)
    nodes[1, 1] += 0.1
    nodes[7, 0] -= 0.2
    quads = [[0, 1, 4, 3], [1, 2, 5, 4], [3, 4, 7, 6], [4, 5, 8, 7]]
    return build_mesh(nodes, quads, [0, 0, 0, 0], [], material)


def check_patch_test(tol: float = 1e-10) -> CheckResult:
    """Boundary nodes follow a homogeneous in-plane stretch; the free interior node must reproduce it."""
    mesh = distorted_patch()
    model = Model(mesh)
    dm = model.dofmap
    F = np.array([[1.01, 0.004, 0.0], [-0.003, 0.995, 0.0], [0.0, 0.0, 1.0]])
    target = mesh.nodes @ F.T - mesh.nodes
    boundary = [0, 1, 2, 3, 5, 6, 7, 8]
    presc = dm.trans[boundary].ravel()
    vals = target[boundary].ravel()
    nz = vals != 0
    fixed = presc[~nz]
    bcs = BoundaryConditions(fixed=fixed, prescribed=presc[nz], prescribed_values=vals[nz])
    traj = run(model, bcs, SolverConfig(max_increments=1, tolerance=1e-15))
    U = traj.final_U
    err = _rel(U[dm.trans[4]], target[4])
    # membrane strains must equal the homogeneous Green-Lagrange strain in each element frame
    E = 0.5 * (F.T @ F - np.eye(3))
    strains = model.elements.local_strains(U[model.elem_dofs])
    serr = 0.0
    for e in range(mesh.n_elements):
        Xe = mesh.nodes[mesh.quads[e]]
        ex = (Xe[1] - Xe[0]) / np.linalg.norm(Xe[1] - Xe[0])
        ez = np.cross(ex, Xe[3] - Xe[0])
        ez /= np.linalg.norm(ez)
        ey = np.cross(ez, ex)
        loc = np.array([ex @ E @ ex, ey @ E @ ey, 2 * ex @ E @ ey])
        serr = max(serr, _rel(strains[e, :, 0:3], np.broadcast_to(loc, (4, 3))))
        serr = max(serr, np.abs(strains[e, :, 3:]).max() / np.abs(loc).max())
    worst = max(err, serr)
    return CheckResult(
        "constant membrane strain patch test", traj.completed and worst <= tol, worst, tol,
        f"interior node {err:.1e}, strains {serr:.1e}",
    )


def run_all(quick: bool = False) -> list[CheckResult]:
    n = 20 if quick else 100
    out = []
    out += check_element_derivatives(n)
    out += check_crease_derivatives(n)
    out.append(check_assembled_symmetry())
    model = two_panel_model()
    rng = np.random.default_rng(4)
    out += check_invariance([("two panels", model, rng.normal(0, 0.05, model.total_dofs))])
    out += check_crease_law()
    out += check_recovery_sequence()
    out.append(check_patch_test())
    return out
