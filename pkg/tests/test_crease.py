import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from orishell.checks import central_gradient, random_crease
from orishell.crease import (
    CreaseParams,
    crease_contribution,
    crease_density_derivatives,
    crease_energy_density,
    fold_angle,
    fold_angle_derivatives,
)
from orishell.errors import BarrierOverflow, CreaseError, ZeroDirector
from orishell.mesh import default_barriers

X = np.array([1.0, 0.0, 0.0])
Z = np.array([0.0, 0.0, 1.0])

finite = st.floats(-10, 10, allow_nan=False)
vec = st.tuples(finite, finite, finite).map(np.array).filter(lambda v: np.linalg.norm(v) > 1e-3)


def params(k=1.0, t0=0.0, tl=None, tr=None, length=1.0):
    dl, dr = default_barriers(t0)
    return CreaseParams(*(np.array(v, float) for v in (k, t0, dl if tl is None else tl, dr if tr is None else tr, length)))


def rot_x(t):
    return Rotation.from_rotvec(t * X).as_matrix()


@pytest.mark.parametrize("t", [0.0, 0.3, np.pi / 2, -np.pi / 2, 2.5, -3.0])
def test_fold_angle_of_rotated_director(t):
    assert fold_angle(Z, rot_x(t) @ Z, X) == pytest.approx(t, abs=1e-15)


def test_fold_angle_hand_examples():
    assert fold_angle(Z, np.array([0.0, -1.0, 0.0]), X) == pytest.approx(np.pi / 2)
    assert fold_angle(Z, np.array([0.0, 1.0, 0.0]), X) == pytest.approx(-np.pi / 2)
    # magnitudes of the directors do not matter
    assert fold_angle(3 * Z, 0.1 * np.array([0.0, 1.0, 1.0]), X) == pytest.approx(-np.pi / 4)


@given(vec, vec, vec)
def test_fold_angle_antisymmetric_under_swap(p, q, axis):
    # compared on the circle: +pi and -pi are the same antiparallel state
    d = fold_angle(q, p, axis) + fold_angle(p, q, axis)
    assert np.cos(d) == pytest.approx(1.0, abs=1e-12)


def off_axis(v, axis):
    return np.linalg.norm(np.cross(v, axis)) > 0.1 * np.linalg.norm(v) * np.linalg.norm(axis)


@given(vec, vec, vec, st.integers(0, 2**32 - 1))
def test_fold_angle_invariant_under_rotation(p, q, axis, seed):
    # the angle is undefined when a director lies along the crease axis
    assume(off_axis(p, axis) and off_axis(q, axis))
    R = Rotation.random(random_state=np.random.default_rng(seed)).as_matrix()
    t = fold_angle(p, q, axis)
    t2 = fold_angle(R @ p, R @ q, R @ axis)
    assert np.cos(t2 - t) == pytest.approx(1.0, abs=1e-12)


def test_fold_angle_derivatives_match_differences(rng):
    for _ in range(10):
        v = rng.normal(size=9)
        th, g, H = fold_angle_derivatives(v[3:6], v[6:9], v[0:3])
        f = lambda w: float(fold_angle(w[3:6], w[6:9], w[0:3]))
        assert th == pytest.approx(f(v))
        assert np.abs(central_gradient(f, v, 1e-6) - g).max() < 1e-6 * max(1.0, np.abs(g).max())
        Hfd = np.array([central_gradient(lambda w: fold_angle_derivatives(w[3:6], w[6:9], w[0:3])[1][i], v, 1e-6) for i in range(9)])
        assert np.abs(Hfd - H).max() < 1e-5 * max(1.0, np.abs(H).max())


def test_zero_axis_and_zero_director():
    with pytest.raises(CreaseError):
        fold_angle_derivatives(Z, Z, np.zeros(3))
    with pytest.raises(ZeroDirector):
        fold_angle_derivatives(np.zeros(3), Z, X, h=0.1)


def test_quadratic_core():
    prm = params(k=2.0, t0=0.4)
    th = np.array([0.4, 0.0, 1.2, -1.0])
    assert crease_energy_density(th, prm) == pytest.approx(0.5 * 2.0 * (th - 0.4) ** 2)


def test_density_continuous_and_monotone_past_barriers():
    prm = params(k=1.0, t0=0.2, tl=-1.0, tr=1.5)
    th = np.linspace(-np.pi + 1e-4, np.pi - 1e-4, 20001)
    psi, d1, d2 = crease_density_derivatives(th, prm)
    assert np.all(d2 > 0)
    assert np.all(np.diff(psi[th > 1.5]) > 0) and np.all(np.diff(psi[th < -1.0]) < 0)
    for edge in (-1.0, 1.5):
        lo, hi = np.nextafter(edge, -np.inf), np.nextafter(edge, np.inf)
        v = crease_density_derivatives(np.array([lo, hi]), prm)
        assert abs(v[0][1] - v[0][0]) < 1e-10 and abs(v[1][1] - v[1][0]) < 1e-10


def test_barrier_diverges_logarithmically_near_pi():
    prm = params(k=1.0)
    tr = float(prm.theta_R)
    c = 4 * (np.pi - tr) ** 2 / np.pi**2
    psi = lambda d: crease_energy_density(np.array(np.pi - d), prm)
    # log term plus the linear continuation of the quadratic core
    expected = c * np.log(1e4) + tr * (1e-4 - 1e-8)
    assert psi(1e-8) - psi(1e-4) == pytest.approx(expected, rel=1e-6)
    with pytest.raises(BarrierOverflow):
        crease_energy_density(np.array(np.pi), prm)


def test_uniform_fold_energy_is_length_times_density():
    ell, h, t = 1.7, 0.1, 0.8
    y = np.array([np.zeros(3), ell * X, Z * h / 2, Z * h / 2, rot_x(t) @ Z * h / 2, rot_x(t) @ Z * h / 2])
    prm = params(k=0.3, t0=0.1, length=ell)
    e, g, H = crease_contribution(y, prm, h=h)
    assert e[0] == pytest.approx(ell * 0.5 * 0.3 * (t - 0.1) ** 2, rel=1e-13)


@given(st.integers(0, 2**32 - 1))
def test_contribution_gradient(seed):
    rng = np.random.default_rng(seed)
    y, prm, h = random_crease(rng)
    e, g, H = crease_contribution(y, prm, h=h)
    f = lambda v: float(crease_contribution(v.reshape(6, 3), prm, h=h, hessian=False)[0][0])
    fd = central_gradient(f, y.ravel(), 1e-6 * np.abs(y).max())
    assert np.abs(fd - g[0]).max() <= 1e-6 * max(np.abs(g[0]).max(), 1e-300)
    assert np.allclose(H[0], H[0].T, rtol=0, atol=1e-12 * np.abs(H[0]).max())
