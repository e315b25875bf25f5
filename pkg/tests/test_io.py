import json

import numpy as np
import pytest

from legendrian import catalog, io
from legendrian.contact import FormalLegendrian
from legendrian.geometry import ValidationError
from legendrian.invariants import seifert_framing
from legendrian.loops import transport_framing
from legendrian.unitary import Unitary2, a_theta_loop, orbit_maps


def through_text(obj):
    return json.loads(io.dumps(obj))


def test_curve_round_trip(greatcircle):
    back = io.curve_from_json(through_text(io.curve_to_json(greatcircle)))
    assert back.space is greatcircle.space
    assert np.array_equal(back.samples, greatcircle.samples)


def test_front_round_trip():
    front = catalog.get("trefoil-r3").front
    back = io.front_from_json(through_text(io.planar_to_json(front)))
    assert np.array_equal(back.samples, front.samples) and back.cusps == front.cusps


def test_front_cusps_are_recomputed():
    obj = io.planar_to_json(catalog.unknot_front(256))
    obj["cusps"] = [5]
    assert io.front_from_json(obj).cusps == (0, 128)


def test_formal_round_trip(unknot):
    fl = FormalLegendrian.constant(unknot, steps=2)
    back = io.formal_from_json(through_text(io.formal_to_json(fl)))
    assert np.array_equal(back.F, fl.F)


def test_framing_round_trip(unknot):
    f = seifert_framing(unknot)
    assert np.array_equal(io.framing_from_json(through_text(io.framing_to_json(f))).vectors, f.vectors)


def test_loop_round_trip(greatcircle):
    ll = a_theta_loop(1, greatcircle, 64)
    back = io.loop_from_json(through_text(io.loop_to_json(ll)))
    # S^3 samples are renormalized on load
    assert np.abs(back.curves - ll.curves).max() < 1e-15
    fl = transport_framing(greatcircle, seifert_framing(greatcircle), orbit_maps(1, 64))
    fback = io.framing_loop_from_json(through_text(io.framing_loop_to_json(fl, ll.space)))
    assert np.array_equal(fback.vectors, fl.vectors)


def test_loop_count_checked(greatcircle):
    obj = io.loop_to_json(a_theta_loop(1, greatcircle, 64))
    obj["num_theta"] = 63
    with pytest.raises(ValidationError, match="num_theta is 63"):
        io.loop_from_json(obj, "x.json")


def test_unitary_round_trip(rng):
    u = Unitary2.random(rng)
    assert np.array_equal(io.unitary_from_json(through_text(io.unitary_to_json(u))).matrix, u.matrix)


def test_malformed_json_location():
    with pytest.raises(ValidationError, match=r"in\.json:2:5: malformed JSON"):
        io.parse_json('{"a": 1,\n    oops}', "in.json")


def test_missing_field():
    with pytest.raises(ValidationError, match="missing field 'samples'"):
        io.curve_from_json({"space": "r3"}, "c.json")
    with pytest.raises(ValidationError, match="not a numeric array"):
        io.curve_from_json({"space": "r3", "samples": [[1, "a", 2]]}, "c.json")


def test_missing_file():
    with pytest.raises(ValidationError, match="no such file"):
        io.read_text("/nonexistent/curve.json")
