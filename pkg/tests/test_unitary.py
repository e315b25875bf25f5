import logging

import numpy as np
import pytest

from legendrian.contact import contact_residual
from legendrian.geometry import ONE, QI, QJ, QK, ValidationError, left_matrix, qmul
from legendrian.invariants import rot, tb
from legendrian.loops import rot_pi1
from legendrian.unitary import (
    Rotation4,
    Unitary2,
    a_pr,
    a_theta_loop,
    act,
    base_at_one,
    d_sphere_equator,
    equator_point,
    great_circle,
    orbit_maps,
    spin_lift,
    spin_lift_closes,
    tau_framings,
)


def quaternion_of(z1, z2):
    # z1 + z2 j with z2 j = (c + d i) j = c j + d k
    return np.array([z1.real, z1.imag, z2.real, z2.imag])


def test_act_identity(greatcircle):
    assert np.array_equal(act(Unitary2.identity(), greatcircle).samples, greatcircle.samples)


def test_act_pointwise(greatcircle, rng):
    u = Unitary2.random(rng)
    moved = act(u, greatcircle)
    for n in (0, 17, 300):
        w, x, y, z = greatcircle.samples[n]
        z1, z2 = u.matrix @ np.array([w + 1j * x, y + 1j * z])
        assert np.abs(moved.samples[n] - quaternion_of(z1, z2)).max() < 1e-12


def test_group_action(greatcircle, rng):
    u, v = Unitary2.random(rng), Unitary2.random(rng)
    lhs = act(u @ v, greatcircle).samples
    rhs = act(u, act(v, greatcircle)).samples
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_unitaries_preserve_contact_structure(greatcircle, rng):
    for _ in range(5):
        u = Unitary2.random(rng)
        moved = act(u, greatcircle)
        assert contact_residual(moved)[0] < 1e-9
        # complex linear maps commute with left multiplication by i
        r = u.real().matrix
        assert np.abs(r @ left_matrix(QI) - left_matrix(QI) @ r).max() < 1e-12
    assert (tb(moved), rot(moved)) == (-1, 0)


def test_right_multiplication(rng):
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    r = Unitary2.right_multiplication(q).real()
    x = rng.normal(size=4)
    assert np.abs(r(x) - qmul(x, q)).max() < 1e-12


def test_unitary_validation():
    with pytest.raises(ValidationError, match="not unitary"):
        Unitary2(np.array([[1, 0], [0, 2]]))
    with pytest.raises(ValidationError, match="2x2"):
        Unitary2(np.eye(3))
    with pytest.raises(ValidationError, match="not a rotation"):
        Rotation4(np.diag([1.0, 1.0, 1.0, -1.0]))


def test_base_at_one():
    loop = act(Unitary2.random(np.random.default_rng(5)), great_circle(QJ))
    based, _ = base_at_one(loop)
    assert np.abs(based.samples[0] - ONE).max() < 1e-12


def test_a_theta_slots(greatcircle):
    ll = a_theta_loop(0, greatcircle, 32)
    assert np.abs(ll.curves - greatcircle.samples[None]).max() < 1e-12
    ll = a_theta_loop(3, greatcircle, 64)
    assert np.abs(ll.curves[0] - greatcircle.samples).max() < 1e-12
    # theta = pi/2 with m = 3: the second coordinate picks up e^{3 i pi/2} = -i
    t = greatcircle.t
    expected = np.column_stack([np.cos(t), 0 * t, 0 * t, -np.sin(t)])
    assert np.abs(ll.curves[16] - expected).max() < 1e-12


def test_orbit_maps_are_the_loop(greatcircle):
    maps = orbit_maps(2, 64)
    ll = a_theta_loop(2, greatcircle, 64)
    assert np.abs(np.einsum("mij,nj->mni", maps, greatcircle.samples) - ll.curves).max() < 1e-12


@pytest.mark.parametrize("m", range(-3, 4))
def test_orbit_degrees(greatcircle, m):
    assert rot_pi1(a_theta_loop(m, greatcircle)) == m


def test_great_circle_values():
    p = equator_point(0.3)
    loop = great_circle(p, 64)
    assert np.abs(loop.samples[16] - p).max() < 1e-15
    assert np.abs(loop.samples[32] + ONE).max() < 1e-15
    with pytest.raises(ValidationError, match="unit imaginary"):
        great_circle(ONE)


def test_a_pr_examples():
    assert np.abs(a_pr(QJ, 0.0).matrix - np.eye(4)).max() < 1e-15
    r = a_pr(QJ, 1.0)
    assert np.allclose(r(QI), QJ) and np.allclose(r(QJ), -QI)
    assert np.allclose(r(ONE), ONE) and np.allclose(r(QK), QK)
    half = a_pr(QK, 0.5)(QI)
    assert np.allclose(half, (QI + QK) / np.sqrt(2))
    with pytest.raises(ValidationError):
        a_pr(QJ, 1.5)
    with pytest.raises(ValidationError, match="equator"):
        a_pr(QI, 0.5)


def test_tau_north_values():
    assert np.allclose(tau_framings(QJ, "north", 32).vectors, QI)
    assert np.allclose(tau_framings(QK, "north", 32).vectors, QJ)
    with pytest.raises(ValidationError, match="variant"):
        tau_framings(QJ, "east")


def test_tau_south_is_opposite():
    for phi in (0.0, 1.0, 2.5):
        p = equator_point(phi)
        north = tau_framings(p, "north", 32).vectors
        south = tau_framings(p, "south", 32).vectors
        assert np.abs(south + north).max() < 1e-12


def test_tau_no_correction_logged(caplog):
    with caplog.at_level(logging.WARNING, logger="legendrian.unitary"):
        tau_framings(equator_point(0.7), "north", 32)
        tau_framings(equator_point(0.7), "south", 32)
    assert not caplog.records


def test_d_values():
    assert d_sphere_equator(64) == 0
    assert d_sphere_equator(64, south_twist=2) == 2
    assert d_sphere_equator(64, south_twist=-1) == -1
    assert d_sphere_equator(64, north="north-transported") == 2
    with pytest.raises(ValidationError, match="at least 64"):
        d_sphere_equator(32)


def test_spin_lift_reproduces_maps():
    maps = orbit_maps(1, 16)
    a, b = spin_lift(maps)
    x = np.random.default_rng(0).normal(size=4)
    for r, qa, qb in zip(maps, a, b):
        qb_conj = qb * np.array([1, -1, -1, -1])
        assert np.allclose(qmul(qmul(qa, x), qb_conj), r @ x)


def test_spin_lift_parity():
    assert [spin_lift_closes(m, 64) for m in range(-3, 4)] == [False, True, False, True, False, True, False]
