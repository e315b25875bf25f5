"""JSON encodings of curves, fronts, framings, loops and unitaries."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

from .contact import FormalLegendrian
from .geometry import SampledLoop, Space, ValidationError
from .invariants import NormalFraming
from .loops import FramingLoop, LegendrianLoop
from .projections import FrontCurve, PlanarCurve
from .unitary import Unitary2


def parse_json(text: str, source: str = "<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}:{exc.lineno}:{exc.colno}: malformed JSON ({exc.msg})") from None


def _field(obj, key: str, source: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ValidationError(f"{source}: missing field {key!r}")
    return obj[key]


def _array(value, source: str, key: str) -> np.ndarray:
    try:
        return np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError(f"{source}: field {key!r} is not a numeric array") from None


def curve_to_json(loop: SampledLoop) -> dict:
    return {"space": loop.space.value, "samples": loop.samples.tolist()}


def curve_from_json(obj, source: str = "<input>") -> SampledLoop:
    space = Space.parse(_field(obj, "space", source))
    return SampledLoop(space, _array(_field(obj, "samples", source), source, "samples"))


def formal_to_json(fl: FormalLegendrian) -> dict:
    return {"curve": curve_to_json(fl.loop), "homotopy": fl.F.tolist()}


def formal_from_json(obj, source: str = "<input>") -> FormalLegendrian:
    loop = curve_from_json(_field(obj, "curve", source), source)
    return FormalLegendrian(loop, _array(_field(obj, "homotopy", source), source, "homotopy"))


def planar_to_json(pc: PlanarCurve) -> dict:
    out = {"samples": pc.samples.tolist()}
    if isinstance(pc, FrontCurve):
        out["cusps"] = list(pc.cusps)
    return out


def planar_from_json(obj, source: str = "<input>") -> PlanarCurve:
    return PlanarCurve(_array(_field(obj, "samples", source), source, "samples"))


def front_from_json(obj, source: str = "<input>") -> FrontCurve:
    # stored cusps are advisory; they are recomputed from the samples
    return FrontCurve(_array(_field(obj, "samples", source), source, "samples"))


def framing_to_json(f: NormalFraming) -> dict:
    return {"vectors": np.asarray(f.vectors).tolist()}


def framing_from_json(obj, source: str = "<input>") -> NormalFraming:
    return NormalFraming(_array(_field(obj, "vectors", source), source, "vectors"))


def loop_to_json(ll: LegendrianLoop) -> dict:
    return {"space": ll.space.value, "num_theta": ll.m, "curves": ll.curves.tolist()}


def loop_from_json(obj, source: str = "<input>") -> LegendrianLoop:
    space = Space.parse(_field(obj, "space", source))
    curves = _array(_field(obj, "curves", source), source, "curves")
    m = _field(obj, "num_theta", source)
    if len(curves) != m:
        raise ValidationError(f"{source}: num_theta is {m} but {len(curves)} curves were given")
    return LegendrianLoop(space, curves)


def framing_loop_to_json(fl: FramingLoop, space: Space) -> dict:
    return {"space": space.value, "num_theta": fl.m, "vectors": fl.vectors.tolist()}


def framing_loop_from_json(obj, source: str = "<input>") -> FramingLoop:
    vec = _array(_field(obj, "vectors", source), source, "vectors")
    m = _field(obj, "num_theta", source)
    if len(vec) != m:
        raise ValidationError(f"{source}: num_theta is {m} but {len(vec)} framings were given")
    return FramingLoop(vec)


def unitary_to_json(u: Unitary2) -> dict:
    return {"rows": [[[z.real, z.imag] for z in row] for row in u.matrix]}


def unitary_from_json(obj, source: str = "<input>") -> Unitary2:
    rows = _array(_field(obj, "rows", source), source, "rows")
    if rows.shape != (2, 2, 2):
        raise ValidationError(f"{source}: rows must be 2x2 pairs [re, im]")
    return Unitary2(rows[..., 0] + 1j * rows[..., 1])


def read_text(path: str | None) -> tuple[str, str]:
    """Contents of ``path``, or of stdin for ``None`` / ``-``."""
    if path in (None, "-"):
        return sys.stdin.read(), "<stdin>"
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"no such file or catalog entry: {path}")
    return p.read_text(), str(p)


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))
