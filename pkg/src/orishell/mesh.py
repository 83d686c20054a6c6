"""Geometry, connectivity, panels, creases and DOF numbering.

Directors live on (panel, node) pairs: elements of one panel share a
director at a node, while the two panels meeting at a crease each carry
their own copy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DanglingNode,
    DegenerateElement,
    MeshError,
    NonFlatPanel,
    NonManifoldCrease,
    ValidationError,
)

GAUSS = 1.0 / np.sqrt(3.0)
GAUSS_POINTS = np.array([[-GAUSS, -GAUSS], [GAUSS, -GAUSS], [GAUSS, GAUSS], [-GAUSS, GAUSS]])

# local edges of a quad, counterclockwise
QUAD_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0))


@dataclass(frozen=True)
class Material:
    E: float
    nu: float
    h: float

    def __post_init__(self):
        if not self.E > 0:
            raise ValidationError("material.E: E > 0 required")
        if not -1.0 < self.nu < 0.5:
            raise ValidationError("material.nu: -1 < nu < 0.5 required")
        if not self.h > 0:
            raise ValidationError("material.h: h > 0 required")

    @property
    def bending_rigidity(self) -> float:
        return self.E * self.h**3 / (12.0 * (1.0 - self.nu**2))


def default_barriers(theta0: float) -> tuple[float, float]:
    """Barrier angles engaging over the last 10% of the approach to -pi / +pi."""
    return theta0 - 0.9 * (theta0 + np.pi), theta0 + 0.9 * (np.pi - theta0)


@dataclass(frozen=True)
class CreaseSpec:
    """User-facing crease description: an edge plus folding parameters."""

    node1: int
    node2: int
    k_f: float
    theta0: float = 0.0
    theta_L: float | None = None
    theta_R: float | None = None


@dataclass(frozen=True)
class CreaseSegment:
    elem_a: int
    elem_b: int
    node1: int
    node2: int
    length: float
    k_f: float
    theta0: float
    theta_L: float
    theta_R: float


def validate_crease_params(k_f, theta0, theta_L, theta_R, where="crease"):
    if not k_f >= 0:
        raise ValidationError(f"{where}.k_f: k_f >= 0 required")
    if not theta_L <= theta_R:
        raise ValidationError(f"{where}: θL ≤ θR required")
    if not -np.pi < theta_L <= theta0 <= theta_R < np.pi:
        raise ValidationError(f"{where}: -π < θL ≤ θ0 ≤ θR < π required")


def shape_functions(xi: float, eta: float):
    """Bilinear shape functions and their natural derivatives."""
    N = 0.25 * np.array([(1 - xi) * (1 - eta), (1 + xi) * (1 - eta), (1 + xi) * (1 + eta), (1 - xi) * (1 + eta)])
    dxi = 0.25 * np.array([-(1 - eta), (1 - eta), (1 + eta), -(1 + eta)])
    deta = 0.25 * np.array([-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)])
    return N, dxi, deta


@dataclass(eq=False)
class Mesh:
    nodes: np.ndarray  # (N, 3) initial mid-surface positions
    quads: np.ndarray  # (E, 4) node ids, counterclockwise
    panels: np.ndarray  # (E,) panel id per element
    creases: tuple[CreaseSegment, ...]
    material: Material
    # populated by build_mesh
    slot_keys: tuple[tuple[int, int], ...] = field(default=())

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.quads)

    @property
    def n_panels(self) -> int:
        return int(self.panels.max()) + 1 if len(self.panels) else 0

    def panel_elements(self, panel: int) -> np.ndarray:
        return np.flatnonzero(self.panels == panel)

    def characteristic_size(self) -> float:
        """Mean element edge length."""
        X = self.nodes[self.quads]
        edges = X[:, [1, 2, 3, 0]] - X
        return float(np.linalg.norm(edges, axis=-1).mean())

    def area(self) -> float:
        total = 0.0
        for g in GAUSS_POINTS:
            _, dxi, deta = shape_functions(*g)
            X = self.nodes[self.quads]
            a = np.einsum("i,eid->ed", dxi, X)
            b = np.einsum("i,eid->ed", deta, X)
            total += np.linalg.norm(np.cross(a, b), axis=-1).sum()
        return float(total)


def _element_normal(X: np.ndarray) -> np.ndarray:
    n = np.cross(X[1] - X[0], X[3] - X[0])
    return n / np.linalg.norm(n)


def _check_element(eid: int, X: np.ndarray):
    n = np.cross(X[1] - X[0], X[3] - X[0])
    nn = np.linalg.norm(n)
    if nn == 0.0:
        raise DegenerateElement(f"element {eid}: edges 1-2 and 1-4 are parallel")
    n = n / nn
    for g in GAUSS_POINTS:
        _, dxi, deta = shape_functions(*g)
        J = np.dot(np.cross(dxi @ X, deta @ X), n)
        if not J > 0.0:
            raise DegenerateElement(f"element {eid}: J_o = {J:.3e} <= 0 at quadrature point {tuple(g)}")


def _panel_is_connected(elems: np.ndarray, quads: np.ndarray) -> bool:
    if len(elems) <= 1:
        return True
    edge_owner: dict[tuple[int, int], list[int]] = {}
    for e in elems:
        q = quads[e]
        for i, j in QUAD_EDGES:
            edge_owner.setdefault(tuple(sorted((int(q[i]), int(q[j])))), []).append(int(e))
    adj: dict[int, set[int]] = {int(e): set() for e in elems}
    for owners in edge_owner.values():
        for a in owners:
            adj[a].update(o for o in owners if o != a)
    seen = {int(elems[0])}
    stack = [int(elems[0])]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(elems)


def build_mesh(
    nodes: Sequence[Sequence[float]],
    quads: Sequence[Sequence[int]],
    panel_assignment: Sequence[int],
    crease_list: Iterable[CreaseSpec],
    material: Material,
) -> Mesh:
    """Validate topology and resolve crease edges to their two elements."""
    X = np.asarray(nodes, dtype=float).reshape(-1, 3)
    Q = np.asarray(quads, dtype=np.int64).reshape(-1, 4)
    P = np.asarray(panel_assignment, dtype=np.int64).reshape(-1)
    if len(P) != len(Q):
        raise MeshError("panel_assignment must give one panel per element")
    if not np.all(np.isfinite(X)):
        raise MeshError("node coordinates must be finite")
    if Q.size and (Q.min() < 0 or Q.max() >= len(X)):
        raise MeshError("connectivity references an unknown node id")
    for eid, q in enumerate(Q):
        if len(set(q.tolist())) != 4:
            raise DegenerateElement(f"element {eid}: nodes must be distinct")
    used = np.zeros(len(X), dtype=bool)
    used[Q.ravel()] = True
    if not used.all():
        raise DanglingNode(f"node {int(np.flatnonzero(~used)[0])} belongs to no element")
    if len(P) and (P.min() < 0 or set(np.unique(P).tolist()) != set(range(int(P.max()) + 1))):
        raise MeshError("panel ids must be dense 0..n_panels-1")
    for eid, q in enumerate(Q):
        _check_element(eid, X[q])
    for p in range(int(P.max()) + 1 if len(P) else 0):
        if not _panel_is_connected(np.flatnonzero(P == p), Q):
            raise MeshError(f"panel {p} is not edge-connected")

    edge_elems: dict[tuple[int, int], list[int]] = {}
    for eid, q in enumerate(Q):
        for i, j in QUAD_EDGES:
            edge_elems.setdefault(tuple(sorted((int(q[i]), int(q[j])))), []).append(eid)

    segments = []
    for ci, spec in enumerate(crease_list):
        key = tuple(sorted((int(spec.node1), int(spec.node2))))
        owners = edge_elems.get(key, [])
        if len(owners) > 2:
            raise NonManifoldCrease(f"crease {ci}: edge {key} shared by {len(owners)} elements")
        if len(owners) != 2:
            raise MeshError(f"crease {ci}: edge {key} must be shared by exactly two elements")
        ea, eb = owners
        if P[ea] == P[eb]:
            raise MeshError(f"crease {ci}: both elements belong to panel {int(P[ea])}")
        tl, tr = default_barriers(spec.theta0)
        tl = tl if spec.theta_L is None else spec.theta_L
        tr = tr if spec.theta_R is None else spec.theta_R
        validate_crease_params(spec.k_f, spec.theta0, tl, tr, where=f"creases[{ci}]")
        length = float(np.linalg.norm(X[spec.node2] - X[spec.node1]))
        segments.append(
            CreaseSegment(ea, eb, int(spec.node1), int(spec.node2), length, float(spec.k_f), float(spec.theta0), float(tl), float(tr))
        )

    slots = sorted({(int(p), int(n)) for q, p in zip(Q, P) for n in q}, key=lambda s: (s[1], s[0]))
    return Mesh(X, Q, P, tuple(segments), material, tuple(slots))


@dataclass(frozen=True)
class Directors:
    """Initial directors, one per (panel, node) slot, in DOF-map order."""

    keys: tuple[tuple[int, int], ...]
    vectors: np.ndarray  # (S, 3)

    def index(self) -> dict[tuple[int, int], int]:
        return {k: i for i, k in enumerate(self.keys)}


def init_directors(mesh: Mesh, flat_tol: float = 1e-8) -> Directors:
    """Directors of length h/2 normal to each (flat) panel."""
    half = 0.5 * mesh.material.h
    normals = {}
    for p in range(mesh.n_panels):
        elems = mesh.panel_elements(p)
        n0 = _element_normal(mesh.nodes[mesh.quads[elems[0]]])
        for e in elems:
            Xe = mesh.nodes[mesh.quads[e]]
            for i in range(4):
                t1 = Xe[(i + 1) % 4] - Xe[i]
                t2 = Xe[(i - 1) % 4] - Xe[i]
                ni = np.cross(t1, t2)
                ni /= np.linalg.norm(ni)
                cosang = float(np.dot(ni, n0))
                if cosang < 0.0:
                    raise DegenerateElement(f"element {e}: node ordering opposes panel {p} orientation")
                ang = np.arctan2(np.linalg.norm(np.cross(ni, n0)), cosang)
                if ang > flat_tol:
                    raise NonFlatPanel(f"panel {p}: nodal normal at element {e} deviates by {ang:.3e} rad")
        normals[p] = n0
    vecs = np.array([half * normals[p] for p, _ in mesh.slot_keys]).reshape(-1, 3)
    return Directors(mesh.slot_keys, vecs)


@dataclass(frozen=True)
class DofMap:
    trans: np.ndarray  # (N, 3)
    dirs: np.ndarray  # (S, 3)
    slot_index: dict
    total_dofs: int

    def trans_dof(self, node: int) -> np.ndarray:
        return self.trans[node]

    def dir_dof(self, panel: int, node: int) -> np.ndarray:
        return self.dirs[self.slot_index[(panel, node)]]

    def node_director_dofs(self, node: int) -> np.ndarray:
        """All director DOFs attached to a node, across its panels."""
        idx = [i for (p, n), i in self.slot_index.items() if n == node]
        return self.dirs[sorted(idx)].reshape(-1, 3)


def build_dof_map(mesh: Mesh) -> DofMap:
    """Node-major numbering: a node's translations, then its director slots by panel id."""
    by_node: dict[int, list[int]] = {}
    for s, (p, n) in enumerate(mesh.slot_keys):
        by_node.setdefault(n, []).append(s)
    trans = np.empty((mesh.n_nodes, 3), dtype=np.int64)
    dirs = np.empty((len(mesh.slot_keys), 3), dtype=np.int64)
    k = 0
    for n in range(mesh.n_nodes):
        trans[n] = (k, k + 1, k + 2)
        k += 3
        for s in by_node.get(n, []):
            dirs[s] = (k, k + 1, k + 2)
            k += 3
    index = {key: i for i, key in enumerate(mesh.slot_keys)}
    return DofMap(trans, dirs, index, k)
