import numpy as np
import pytest
from hypothesis import given, strategies as st

from legendrian import catalog
from legendrian.contact import (
    FormalLegendrian,
    alpha,
    contact_residual,
    d_alpha,
    formal_invariants,
    frame_coordinates,
    reeb,
    require_legendrian,
    validate_formal,
    xi_frame,
)
from legendrian.geometry import QI, SampledLoop, Space, ValidationError, derivative, normalize, parameter_grid
from legendrian.invariants import linking_number, rot, tb
from legendrian.unitary import great_circle

vec = st.lists(st.floats(-3, 3), min_size=4, max_size=4).map(np.array)


@given(vec, vec)
def test_reeb_s3(p, v):
    if np.linalg.norm(p) < 1e-3:
        return
    p = normalize(p)
    r = reeb(Space.S3, p)
    assert np.isclose(alpha(Space.S3, p, r), 1.0)
    v = v - np.dot(v, p) * p
    assert np.isclose(d_alpha(Space.S3, p, r, v), 0.0, atol=1e-9)
    e1, e2 = xi_frame(Space.S3, p)
    assert np.isclose(alpha(Space.S3, p, e1), 0, atol=1e-12)
    assert np.isclose(alpha(Space.S3, p, e2), 0, atol=1e-12)
    assert d_alpha(Space.S3, p, e1, e2) > 0


@given(vec, vec)
def test_reeb_r3(p, v):
    p, v = p[:3], v[:3]
    r = reeb(Space.R3, p)
    assert alpha(Space.R3, p, r) == 1.0
    assert d_alpha(Space.R3, p, r, v) == 0.0
    e1, e2 = xi_frame(Space.R3, p)
    assert alpha(Space.R3, p, e1) == 0 and alpha(Space.R3, p, e2) == 0
    a, b = frame_coordinates(Space.R3, p, 2 * e1 - 3 * e2 + 5 * r)
    assert np.isclose(a, 2) and np.isclose(b, -3)


def test_catalog_is_legendrian():
    for e in catalog.entries():
        assert contact_residual(e.loop)[0] < 1e-9


def test_reeb_orbit_is_not_legendrian():
    res, _ = contact_residual(great_circle(QI))
    assert abs(res - 1.0) < 1e-9
    with pytest.raises(ValidationError, match="not Legendrian"):
        require_legendrian(great_circle(QI))


def test_formal_constant_homotopy_matches_classical():
    for name in ("unknot-r3", "unknot-r3-stab-", "greatcircle-j-s3"):
        loop = catalog.get(name).loop
        fl = FormalLegendrian.constant(loop)
        assert validate_formal(fl).ok
        assert formal_invariants(fl) == (tb(loop), rot(loop))


def test_formal_planar_circle():
    # straight line from (-sin t, cos t, 0) to e1 = (1, 0, sin t) never vanishes
    t = parameter_grid(256)
    loop = SampledLoop(Space.R3, np.column_stack([np.cos(t), np.sin(t), 0 * t]))
    e1 = xi_frame(Space.R3, loop.samples)[0]
    fl = FormalLegendrian.straight_line(loop, e1)
    assert validate_formal(fl).ok
    assert formal_invariants(fl) == (0, 0)
    # the crossing engine agrees on the vertical pushoff
    off = SampledLoop(Space.R3, loop.samples + [0, 0, 0.01])
    assert linking_number(loop, off, method="crossings") == 0


def test_formal_reeb_orbit():
    loop = great_circle(QI)
    target = xi_frame(Space.S3, loop.samples)[0]
    fl = FormalLegendrian.straight_line(loop, target)
    assert validate_formal(fl).ok
    # the Reeb pushoff of a Reeb orbit slides along the orbit itself
    with pytest.raises(ValidationError, match="touch"):
        formal_invariants(fl)
    bad = FormalLegendrian.straight_line(loop, -derivative(loop))
    report = validate_formal(bad)
    assert not report.ok and "nonvanishing" in report.failures
    assert "end_in_xi" in report.failures


def test_formal_shape_checked(unknot):
    with pytest.raises(ValidationError, match="shape"):
        FormalLegendrian(unknot, np.zeros((3, 10, 3)))
