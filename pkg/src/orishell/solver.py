"""Damped Newton solver with adaptive load increments and recovery."""

from __future__ import annotations

import hashlib
import logging
import sys
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import BoundaryConditions, Model, partition_free_dofs
from .errors import OrishellError, RecoveryExhausted, SingularSystem

log = logging.getLogger(__name__)

PIVOT_RTOL = 1e-13
LAMBDA_EPS = 1e-12


@dataclass
class SolverConfig:
    max_increments: int = 100
    max_iterations: int = 50
    tolerance: float | None = None  # None: 1e-8 * characteristic mesh size
    max_recoveries: int = 20
    output_every: int = 1
    verbose: bool = False

    def __post_init__(self):
        if self.max_increments < 1 or self.max_iterations < 1 or self.max_recoveries < 1 or self.output_every < 1:
            raise ValueError("solver settings must be positive")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass
class SolverState:
    U: np.ndarray
    lam: float = 0.0
    alpha: float = 1.0
    beta: float = 1.0
    gamma: int = 0
    delta: int = 0


@dataclass
class Record:
    lam: float
    U: np.ndarray
    energy: float
    element_energy: float
    crease_energy: float
    iterations: int
    eps: float
    residual: float
    alpha: float
    step: float


@dataclass
class Event:
    """One pass through the increment loop, accepted or not."""

    accepted: bool
    delta: int
    lam: float
    alpha: float
    beta: float
    gamma: int
    iterations: int
    reason: str = ""
    state_digest: str = ""  # hash of U after the event, for rollback checks


def state_digest(U: np.ndarray) -> str:
    return hashlib.blake2b(np.ascontiguousarray(U, dtype=float).tobytes(), digest_size=16).hexdigest()


@dataclass
class Trajectory:
    records: list[Record] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)
    status: str = "running"
    error: OrishellError | None = None

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([r.lam for r in self.records])

    @property
    def final_U(self) -> np.ndarray | None:
        return self.records[-1].U if self.records else None


def linear_solve(K: sp.spmatrix, r: np.ndarray) -> np.ndarray:
    """Direct sparse solve of K x = r with a pivot and residual check."""
    r = np.asarray(r, float)
    if r.size == 0:
        return r.copy()
    K = sp.csc_matrix(K)
    try:
        # threshold pivoting keeps the symmetric fill-reducing order for K
        lu = spla.splu(K, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.01, options={"SymmetricMode": True})
    except RuntimeError as exc:
        raise SingularSystem(str(exc)) from exc
    piv = np.abs(lu.U.diagonal())
    if piv.size and (not np.all(np.isfinite(piv)) or piv.min() <= PIVOT_RTOL * piv.max()):
        raise SingularSystem(f"pivot ratio {piv.min() / max(piv.max(), 1e-300):.3e} below {PIVOT_RTOL}")
    x = lu.solve(r)
    rn = np.linalg.norm(r)
    for _ in range(3):
        res = r - K @ x
        if np.linalg.norm(res) <= 1e-10 * rn:
            break
        x = x + lu.solve(res)
    if not np.all(np.isfinite(x)):
        raise SingularSystem("non-finite solution")
    return x


LinearSolver = Callable[[sp.spmatrix, np.ndarray], np.ndarray]


def default_tolerance(model: Model) -> float:
    return 1e-8 * model.mesh.characteristic_size()


def _progress(msg: str, verbose: bool):
    if verbose:
        print(msg, file=sys.stdout, flush=True)
    log.debug(msg)


def run(
    model: Model,
    bcs: BoundaryConditions,
    config: SolverConfig | None = None,
    linear_solver: LinearSolver = linear_solve,
    callback: Callable[[Record], None] | None = None,
) -> Trajectory:
    """Quasi-static solve from lambda = 0 to 1.

    Prescribed DOFs advance by ``step * loaded_disp / max_increments`` per
    increment and external forces act as ``lambda_trial * F_ext``, where
    ``lambda_trial`` is the load parameter at the end of the current increment.
    """
    cfg = config or SolverConfig()
    n = model.total_dofs
    tol = cfg.tolerance if cfg.tolerance is not None else default_tolerance(model)
    free = partition_free_dofs(bcs, n)
    F_ext = bcs.external_force(n)
    dU_presc = bcs.loaded_disp(n) / cfg.max_increments
    fixed = np.asarray(bcs.fixed, dtype=np.int64)
    m = cfg.max_increments

    st = SolverState(U=np.zeros(n))
    traj = Trajectory()

    while st.lam < 1.0 - LAMBDA_EPS and st.gamma <= cfg.max_recoveries:
        st.delta += 1
        U_prev = st.U.copy()
        step = min(st.alpha, (1.0 - st.lam) * m)
        lam_trial = st.lam + step / m
        U = st.U + step * dU_presc
        U[fixed] = 0.0

        eps = np.inf
        it = 0
        reason = ""
        system = None
        while eps > tol and it < cfg.max_iterations:
            try:
                system = model.assemble(U)
                if not np.isfinite(system.energy) or not np.all(np.isfinite(system.F_int)):
                    raise SingularSystem("non-finite energy or internal force")
                r = lam_trial * F_ext - system.F_int
                if free.size:
                    K_ff = system.K[free][:, free]
                    dU = linear_solver(K_ff, r[free])
                else:
                    dU = np.zeros(0)
            except OrishellError as exc:
                reason = f"{type(exc).__name__}: {exc}"
                it = cfg.max_iterations
                eps = np.inf
                break
            U[free] += st.beta * dU
            eps = float(np.linalg.norm(dU))
            it += 1

        threshold = ((st.alpha > 1) + 1) * cfg.max_iterations / (st.beta + 1)
        failed = it >= threshold or not eps <= tol
        if failed:
            st.gamma += 1
            st.delta -= 1
            if st.gamma <= 10:
                st.alpha = st.alpha / 2
            else:
                st.alpha = max(st.alpha, 1.0) * 1.5
                st.beta = st.beta * 0.75
            st.U = U_prev
            traj.events.append(
                Event(False, st.delta, st.lam, st.alpha, st.beta, st.gamma, it, reason or "iteration limit", state_digest(st.U))
            )
            _progress(
                f"increment {st.delta + 1:4d} failed  lambda={st.lam:.6f} alpha={st.alpha:.4g} "
                f"beta={st.beta:.4g} gamma={st.gamma} its={it} ({reason or 'iteration limit'})",
                cfg.verbose,
            )
            continue

        # the accepted state: refresh energies and the residual at the final U
        final = model.assemble(U, hessian=False)
        res = float(np.linalg.norm((lam_trial * F_ext - final.F_int)[free])) if free.size else 0.0
        st.U = U
        st.lam = 1.0 if lam_trial >= 1.0 - LAMBDA_EPS else lam_trial
        st.gamma = 0
        st.beta = 1.0
        alpha_used = st.alpha
        st.alpha = min(st.alpha * 1.1, 1.0) if st.alpha < 1 else max(st.alpha * 0.9, 1.0)
        rec = Record(st.lam, U.copy(), final.energy, final.element_energy, final.crease_energy, it, eps, res, alpha_used, step)
        traj.records.append(rec)
        traj.events.append(Event(True, st.delta, st.lam, st.alpha, st.beta, st.gamma, it, "", state_digest(st.U)))
        _progress(
            f"increment {st.delta:4d} lambda={st.lam:.6f} alpha={st.alpha:.4g} beta={st.beta:.4g} "
            f"its={it} |dU|={eps:.3e}",
            cfg.verbose,
        )
        if callback is not None:
            callback(rec)

    if st.lam >= 1.0 - LAMBDA_EPS:
        traj.status = "completed"
    else:
        traj.status = "failed"
        traj.error = RecoveryExhausted(
            f"recovery attempts exceeded {cfg.max_recoveries} at lambda={st.lam:.6f} after {len(traj.records)} increments"
        )
    return traj
