import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orishell.benchmarks import (
    AnnulusParams,
    MiuraParams,
    cone_map,
    cone_state,
    cone_theory_energy,
    cone_theory_energy_closed,
    elastica_oracle,
    flat_length,
    gen_annulus_sector,
    gen_miura_unit,
    gen_qualitative,
    measure_miura,
    miura_analytic,
    outer_elements,
)
from orishell.benchmarks.annulus import ANNULUS_MATERIAL, principal_curvature
from orishell.benchmarks.miura import miura_nodes
from orishell.benchmarks.runners import max_workers, miura_rows
from orishell.errors import UnknownScene


def angle(u, v):
    return np.arccos(u @ v / np.linalg.norm(u) / np.linalg.norm(v))


# ---------------------------------------------------------------- Miura


def test_miura_analytic_at_rest():
    H, L, W = miura_analytic(MiuraParams())
    g, b = np.deg2rad(60), np.deg2rad(15)
    assert H == pytest.approx(2 * np.sin(g) * np.sin(b))
    assert W == pytest.approx(4 * np.sqrt(1 - np.sin(g) ** 2 * np.sin(b) ** 2))
    assert (H, W) == pytest.approx((0.44829, 3.89822), abs=5e-6)


def test_flat_length():
    p = MiuraParams()
    assert flat_length(p) == pytest.approx(2 * p.b * np.sin(p.gamma))


@given(st.floats(0.01, 1.5), st.floats(0.2, 1.4), st.floats(0.5, 3.0), st.floats(0.5, 3.0))
def test_miura_nodes_are_rigidly_folded(beta, gamma, a, b):
    # every panel is the same parallelogram with sides a, b and sector angle gamma
    p = MiuraParams(a=a, b=b, gamma=gamma, beta=beta)
    X = miura_nodes(p).reshape(3, 3, 3)
    for i in range(2):
        for j in range(2):
            o, along_a, along_b = X[i, j], X[i, j + 1], X[i + 1, j]
            assert np.linalg.norm(along_a - o) == pytest.approx(a, rel=1e-12)
            assert np.linalg.norm(along_b - o) == pytest.approx(b, rel=1e-12)
            assert np.sin(angle(along_a - o, along_b - o)) == pytest.approx(np.sin(gamma), rel=1e-10)
            assert np.linalg.det(np.array([along_a - o, along_b - o, X[i + 1, j + 1] - o])) == pytest.approx(0, abs=1e-12)
    m = measure_miura(X.reshape(-1, 3), p)
    H, L, W = miura_analytic(p)
    assert m.beta == pytest.approx(beta, rel=1e-9)
    assert (m.H, m.L, m.W) == pytest.approx((H, L, W), rel=1e-12)


def test_height_and_width_identity():
    # each a-edge spans half the width horizontally and H vertically
    p = MiuraParams()
    beta = np.linspace(0, np.pi / 2, 7)
    H, _, W = miura_analytic(p, beta)
    assert np.allclose(H**2 + (W / 2) ** 2, p.a**2, rtol=1e-14)


def test_miura_short_fold_follows_analytic():
    p = MiuraParams()
    scene = gen_miura_unit(p, prescribed=1.0, increments=5)
    traj = scene.run()
    assert traj.completed
    rows = miura_rows(scene, traj, p)
    for r in rows:
        assert r["H"] == pytest.approx(r["H_analytic"], rel=1e-6)
        assert r["W"] == pytest.approx(r["W_analytic"], rel=1e-6)
    assert rows[-1]["L/L_flat"] < rows[0]["L/L_flat"]


def test_miura_panel_rigidity_ratio():
    # bending rigidity far above the folding stiffness emulates rigid panels
    scene = gen_miura_unit()
    assert scene.material.bending_rigidity == pytest.approx(1098.9, rel=1e-4)
    assert scene.material.bending_rigidity > 1e4 * scene.creases[0].k_f


# ---------------------------------------------------------------- annulus


def test_annulus_sector_layout():
    p = AnnulusParams(n=32, m=4)
    scene = gen_annulus_sector(p)
    assert scene.nodes.shape == (9 * 33, 3)
    assert len(scene.quads) == 32 * 8 and len(scene.creases) == 32
    assert p.lift == pytest.approx(0.005 / np.sqrt(2))
    assert all(abs(c.theta0) == pytest.approx(np.pi / 2) for c in scene.creases)
    assert len(outer_elements(p)) == 32 * 4 and len(outer_elements(p, True)) == 32 * 3
    assert np.allclose(np.linalg.norm(scene.model.directors.vectors, axis=1), 5e-5, rtol=1e-14)


def test_cone_curvature():
    assert principal_curvature(1.0, np.pi / 2) == pytest.approx(1 / np.sqrt(2))
    # kappa d tan(phi/2) sqrt(1 + tan^2) is one for any apex angle
    phi = 1.1
    t = np.tan(phi / 2)
    assert principal_curvature(0.3, phi) * 0.3 * t * np.sqrt(1 + t * t) == pytest.approx(1.0)


def test_cone_theory_energy():
    p = AnnulusParams()
    D = 4e9 * 1e-12 / 12
    closed = 0.5 * D * (np.pi / 4) * np.log(1.05)
    assert cone_theory_energy_closed(p) == pytest.approx(closed, rel=1e-14)
    assert cone_theory_energy(p) == pytest.approx(closed, rel=1e-10)
    assert closed == pytest.approx(6.3866e-6, rel=1e-4)


def test_cone_map_is_an_isometry():
    p = AnnulusParams()
    rng = np.random.default_rng(0)
    for _ in range(20):
        rho = rng.uniform(p.R - p.a, p.R + p.a)
        if abs(rho - p.R) < 1e-4:
            continue
        t = rng.uniform(np.pi / 2 - p.alpha / 2, np.pi / 2 + p.alpha / 2)
        x = np.array([rho * np.cos(t), rho * np.sin(t), 0.0])
        e = 1e-6
        J = np.array([(cone_map(p, x + e * d) - cone_map(p, x - e * d)) / (2 * e) for d in np.eye(3)[:2]]).T
        assert np.allclose(J.T @ J, np.eye(2), atol=1e-8)


@pytest.mark.parametrize("n, m, tol", [(32, 4, 1e-3), (64, 8, 1e-4)])
def test_exact_cone_state_energy(n, m, tol):
    # the element reproduces the cone's bending energy when placed on it
    p = AnnulusParams(n=n, m=m)
    scene = gen_annulus_sector(p)
    E = scene.model.bending_energy(cone_state(scene, p), outer_elements(p))
    assert E == pytest.approx(cone_theory_energy(p, ANNULUS_MATERIAL), rel=tol)


# ---------------------------------------------------------------- cantilever


def test_elastica_small_load_is_linear():
    EI, L, P = 1e5, 10.0, 1e-2
    u, w = elastica_oracle(P, EI, L)
    w_lin = P * L**3 / (3 * EI)
    assert w == pytest.approx(w_lin, rel=1e-6)
    # shortening of the cubic deflection curve: 3/5 w^2 / L
    assert u == pytest.approx(-0.6 * w_lin**2 / L, rel=1e-5)


def test_elastica_moderate_load():
    u, w = elastica_oracle(40.0)
    assert w == pytest.approx(0.1333, rel=0.02)
    assert u < 0


def test_elastica_tip_stays_on_inextensible_curve():
    for P in (400.0, 4000.0):
        u, w = elastica_oracle(P)
        assert (10 + u) ** 2 + w**2 < 100.0
        assert w < 10.0


# ---------------------------------------------------------------- qualitative and runners


def test_miura_sheet_counts():
    scene = gen_qualitative("miura_sheet", cells=(5, 5))
    assert scene.nodes.shape == (121, 3)
    assert len(scene.quads) == 100 and len(scene.creases) == 180
    scene.model  # panels are flat and creases manifold


def test_full_annulus_scene():
    scene = gen_qualitative("full_annulus", n=16, m=2, theta_R=1.2)
    assert len(scene.creases) == 16
    assert all(c.theta_R == 1.2 for c in scene.mesh.creases)
    with pytest.raises(ValueError):
        gen_qualitative("full_annulus", n=18)


def test_unknown_scene():
    with pytest.raises(UnknownScene):
        gen_qualitative("teaser")


def test_max_workers(monkeypatch):
    monkeypatch.setenv("ORISHELL_THREADS", "2")
    assert max_workers(9) == 2 and max_workers(1) == 1
    monkeypatch.setenv("ORISHELL_THREADS", "zero")
    assert max_workers(3) >= 1
