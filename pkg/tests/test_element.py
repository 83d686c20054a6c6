import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from orishell.checks import central_gradient, random_element
from orishell.element import ElementBatch, element_energy, element_force_stiffness
from orishell.mesh import Material

X_O = np.array([[0, 0, 0], [2, 0, 0], [2, 1, 0], [0, 1, 0]], float)


def directors(h):
    return np.tile([0, 0, h / 2], (4, 1)).astype(float)


def state(trans, dirs):
    return np.concatenate([np.ravel(trans), np.ravel(dirs)])


def test_undeformed_state_is_stress_free():
    mat = Material(1e6, 0.3, 0.01)
    g, K = element_force_stiffness(X_O, directors(mat.h), np.zeros(24), mat)
    assert element_energy(X_O, directors(mat.h), np.zeros(24), mat) == 0.0
    assert np.abs(g).max() == 0.0
    assert np.allclose(K, K.T, atol=1e-12 * np.abs(K).max())


@pytest.mark.parametrize("s", [1e-3, 0.05, 0.3])
def test_uniaxial_stretch_energy(s):
    # nu = 0 decouples the axes, so the energy is E/2 * E11^2 * volume with E11 the Green strain
    mat = Material(2e5, 0.0, 0.01)
    u = np.zeros((4, 3))
    u[:, 0] = s * X_O[:, 0]
    e11 = s + 0.5 * s * s
    expected = 0.5 * mat.E * e11**2 * mat.h * 2.0
    assert element_energy(X_O, directors(mat.h), state(u, np.zeros((4, 3))), mat) == pytest.approx(expected, rel=1e-12)


def cylinder_state(h, kappa):
    """Nodes of X_O wrapped onto a cylinder of curvature kappa about the y axis, directors normal."""
    phi = kappa * (X_O[:, 0] - 1.0)
    x = np.stack([np.sin(phi) / kappa + 1.0, X_O[:, 1], (np.cos(phi) - 1) / kappa], 1)
    d = np.stack([np.sin(phi), np.zeros(4), np.cos(phi)], 1) * h / 2
    return state(x - X_O, d - directors(h))


@pytest.mark.parametrize("h", [1e-1, 1e-2, 1e-3])
def test_cylindrical_bending_has_no_spurious_shear(h):
    mat = Material(1e6, 0.0, h)
    kappa = 0.01
    parts = ElementBatch(X_O[None], directors(h)[None], mat).energy_parts(cylinder_state(h, kappa)[None])
    assert parts["shear"][0] <= 1e-12 * parts["bending"][0]
    assert parts["bending"][0] == pytest.approx(0.5 * mat.bending_rigidity * kappa**2 * 2.0, rel=1e-3)


@given(st.integers(0, 2**32 - 1))
def test_energy_invariant_under_rigid_motion(seed):
    rng = np.random.default_rng(seed)
    X_o, X_n, mat, u = random_element(rng)
    R = Rotation.random(random_state=rng).as_matrix()
    c = rng.normal(size=3)
    x = X_o + u[:12].reshape(4, 3)
    d = X_n + u[12:].reshape(4, 3)
    moved = state(x @ R.T + c - X_o, d @ R.T - X_n)
    e0 = element_energy(X_o, X_n, u, mat)
    scale = mat.E * mat.h * 1.0
    assert abs(element_energy(X_o, X_n, moved, mat) - e0) <= 1e-10 * max(scale, abs(e0))


def test_gradient_matches_central_differences(rng):
    for _ in range(5):
        X_o, X_n, mat, u = random_element(rng)
        g, K = element_force_stiffness(X_o, X_n, u, mat)
        step = 1e-5 * np.abs(X_o).max()
        fd = central_gradient(lambda v: element_energy(X_o, X_n, v, mat), u, step)
        assert np.abs(g - fd).max() <= 1e-6 * np.abs(g).max()


def test_batch_matches_single_element(rng):
    items = [random_element(rng) for _ in range(3)]
    mat = items[0][2]
    items = [(a, b, c) for a, b, _, c in items]
    batch = ElementBatch(np.array([i[0] for i in items]), np.array([i[1] for i in items]), mat)
    e = batch.energy(np.array([i[2] for i in items]))
    for k, (X_o, X_n, u) in enumerate(items):
        assert e[k] == pytest.approx(element_energy(X_o, X_n, u, mat), rel=1e-12)


def test_area_of_parallelogram():
    X = np.array([[0, 0, 0], [2, 0, 0], [2.5, 1, 0], [0.5, 1, 0]], float)
    batch = ElementBatch(X[None], directors(0.01)[None], Material(1.0, 0.0, 0.01))
    assert batch.area[0] == pytest.approx(2.0, rel=1e-14)
