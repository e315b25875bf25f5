import numpy as np
import pytest

from legendrian import catalog
from legendrian.contact import contact_residual
from legendrian.geometry import Space, ValidationError, parameter_grid
from legendrian.invariants import rot, tb
from legendrian.projections import (
    FrontCurve,
    PlanarCurve,
    lift_front,
    lift_lagrangian,
    project,
    signed_area,
    stabilize,
)
from legendrian.verify import random_planar_curve

N = 512


def unit_circle(n=N):
    t = parameter_grid(n)
    return np.column_stack([np.cos(t), np.sin(t)])


def test_signed_area_orientation():
    # polygon area of the inscribed N-gon, computed independently
    n = 4096
    polygon = 0.5 * n * np.sin(2 * np.pi / n)
    assert np.isclose(signed_area(PlanarCurve(unit_circle(n))), polygon, rtol=1e-14)
    assert abs(signed_area(PlanarCurve(unit_circle(n))) - np.pi) < 1e-5
    assert np.isclose(signed_area(PlanarCurve(unit_circle(n)[::-1])), -polygon, rtol=1e-14)


def test_figure_eight_area_vanishes():
    t = parameter_grid(N)
    pc = PlanarCurve(np.column_stack([np.sin(t), np.sin(2 * t)]))
    assert abs(signed_area(pc)) < 1e-12


def test_area_negates_exactly_under_reversal(rng):
    pc = random_planar_curve(rng)
    rev = PlanarCurve(np.roll(pc.samples[::-1], 1, axis=0))
    assert signed_area(rev) == -signed_area(pc)


def test_circle_closure_defect():
    lift = lift_lagrangian(PlanarCurve(unit_circle()))
    assert lift.loop is None
    assert abs(lift.closure_defect + np.pi) < 1e-4


def test_random_closure_defects(rng):
    for _ in range(50):
        pc = random_planar_curve(rng)
        assert abs(lift_lagrangian(pc).closure_defect + signed_area(pc)) <= 1e-6


def test_figure_eight_lifts_to_legendrian():
    t = parameter_grid(N)
    loop, defect = lift_lagrangian(PlanarCurve(np.column_stack([np.sin(t), np.sin(2 * t)])), z0=0.25)
    assert loop is not None and abs(defect) < 1e-12
    assert loop.samples[0, 2] == 0.25
    assert contact_residual(loop)[0] < 1e-9


def test_unknot_front_lift():
    fc = catalog.unknot_front(N)
    assert fc.cusps == (0, N // 2)
    loop = lift_front(fc)
    t = parameter_grid(N)
    # y = z'/x' = sin^2 t cos t / (-sin t)
    assert np.abs(loop.samples[:, 1] + np.sin(t) * np.cos(t)).max() < 1e-9
    assert contact_residual(loop)[0] < 1e-9


def test_trefoil_front_cusps():
    assert catalog.get("trefoil-r3").front.cusps == (0, 128, 256, 384)


def test_vertical_tangency():
    with pytest.raises(ValidationError, match="vertical tangency at sample 0"):
        FrontCurve(unit_circle())


def test_ill_defined_cusp():
    t = parameter_grid(N)
    with pytest.raises(ValidationError, match="ill-defined cusp at sample 0"):
        FrontCurve(np.column_stack([np.sin(t) ** 3, np.sin(t) ** 2]))


def test_front_round_trip():
    for e in catalog.entries(Space.R3):
        again = project(lift_front(e.front), "front")
        assert np.abs(again.samples - e.front.samples).max() <= 1e-9
        assert again.cusps == e.front.cusps


def test_lagrangian_round_trip():
    for e in catalog.entries(Space.R3):
        loop = e.loop
        lifted = lift_lagrangian(project(loop, "lagrangian"), z0=loop.samples[0, 2])
        assert lifted.loop is not None
        assert np.abs(lifted.samples - loop.samples).max() <= 1e-4


@pytest.mark.parametrize("sign", [1, -1])
def test_stabilization(sign):
    fc = catalog.unknot_front(N)
    st = stabilize(fc, sign)
    assert len(st.cusps) == len(fc.cusps) + 2
    loop = lift_front(st)
    assert contact_residual(loop)[0] < 1e-9
    assert (tb(loop), rot(loop)) == (-2, sign)


def test_stabilize_sign_checked():
    with pytest.raises(ValidationError):
        stabilize(catalog.unknot_front(N), 2)


def test_projection_needs_r3(greatcircle):
    with pytest.raises(ValidationError, match="stereographic"):
        project(greatcircle, "front")
    with pytest.raises(ValidationError, match="mode"):
        project(catalog.get("unknot-r3").loop, "side")


def test_planar_validation():
    with pytest.raises(ValidationError, match="shape"):
        PlanarCurve(np.zeros((32, 3)))
    with pytest.raises(ValidationError, match="non-finite"):
        PlanarCurve(np.full((32, 2), np.nan))
