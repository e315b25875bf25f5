import numpy as np
import pytest
from hypothesis import given, strategies as st

from legendrian.geometry import (
    ONE,
    QI,
    QJ,
    QK,
    SampledLoop,
    Space,
    ValidationError,
    choose_pole,
    derivative,
    from_c2,
    inverse_stereographic,
    left_matrix,
    parameter_grid,
    qconj,
    qmul,
    resample,
    right_matrix,
    stereographic,
    to_c2,
)

quat = st.lists(st.floats(-2, 2), min_size=4, max_size=4).map(np.array)


def circle(n=256):
    t = parameter_grid(n)
    return SampledLoop(Space.R3, np.column_stack([np.cos(t), np.sin(t), 0 * t]))


def test_circle_derivative():
    loop = circle()
    t = loop.t
    expected = np.column_stack([-np.sin(t), np.cos(t), 0 * t])
    assert np.abs(derivative(loop) - expected).max() < 1e-6


def test_great_circle_derivative(greatcircle):
    t = greatcircle.t[:, None]
    expected = -np.sin(t) * ONE + np.cos(t) * QJ
    assert np.abs(derivative(greatcircle) - expected).max() < 1e-6


def test_constant_loop_rejected():
    with pytest.raises(ValidationError, match="coincide"):
        SampledLoop(Space.R3, np.ones((32, 3)))


def test_validation_errors():
    with pytest.raises(ValidationError, match="at least 16"):
        SampledLoop(Space.R3, np.random.default_rng(0).normal(size=(8, 3)))
    with pytest.raises(ValidationError, match="shape"):
        SampledLoop(Space.S3, np.zeros((32, 3)))
    pts = circle(64).samples.copy()
    pts[40] = pts[10]
    with pytest.raises(ValidationError, match="not embedded"):
        SampledLoop(Space.R3, pts)


def test_s3_samples_renormalized(greatcircle):
    loop = SampledLoop(Space.S3, 1.0000001 * greatcircle.samples)
    assert np.abs(np.linalg.norm(loop.samples, axis=1) - 1).max() < 1e-15


def test_resample_band_limited_is_exact():
    loop = circle(64)
    up = resample(loop, 200)
    t = up.t
    assert np.abs(up.samples[:, 0] - np.cos(t)).max() < 1e-12
    with pytest.raises(ValidationError):
        resample(loop, 8)


def test_hamilton_table():
    assert np.allclose(qmul(QI, QJ), QK)
    assert np.allclose(qmul(QJ, QK), QI)
    assert np.allclose(qmul(QK, QI), QJ)
    assert np.allclose(qmul(QI, QI), -ONE)


def _as_matrix(q):
    # independent oracle: quaternions as 2x2 complex matrices
    z1, z2 = q[0] + 1j * q[1], q[2] + 1j * q[3]
    return np.array([[z1, z2], [-np.conj(z2), np.conj(z1)]])


@given(quat, quat)
def test_qmul_matches_matrix_model(p, q):
    assert np.allclose(_as_matrix(qmul(p, q)), _as_matrix(p) @ _as_matrix(q), atol=1e-9)


@given(quat, quat)
def test_qmul_matrices(p, q):
    assert np.allclose(left_matrix(p) @ q, qmul(p, q))
    assert np.allclose(right_matrix(q) @ p, qmul(p, q))
    assert np.allclose(qconj(qmul(p, q)), qmul(qconj(q), qconj(p)))


@given(quat)
def test_c2_round_trip(q):
    assert np.array_equal(from_c2(to_c2(q)), q)


def test_stereographic_round_trip(greatcircle):
    pole = choose_pole(greatcircle)
    r3 = stereographic(greatcircle, pole)
    back = inverse_stereographic(r3, pole)
    assert np.abs(back.samples - greatcircle.samples).max() < 1e-12


def test_stereographic_rejects_pole_on_curve(greatcircle):
    with pytest.raises(ValidationError, match="sample 0"):
        stereographic(greatcircle, ONE)


def test_shift_and_reverse(unknot):
    s = unknot.shifted(5)
    assert np.array_equal(s.samples[0], unknot.samples[5])
    assert np.array_equal(unknot.reversed().reversed().samples, unknot.samples)
