"""Named Legendrian curves used as fixtures, examples and CLI inputs."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .geometry import DEFAULT_N, QJ, ONE, SampledLoop, Space, ValidationError, parameter_grid
from .projections import FrontCurve, lift_front, stabilize


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    loop: SampledLoop
    chi: int
    front: FrontCurve | None = None


def unknot_front(n: int = DEFAULT_N) -> FrontCurve:
    t = parameter_grid(n)
    return FrontCurve(np.column_stack([np.cos(t), np.sin(t) ** 3 / 3.0]))


def trefoil_front(n: int = DEFAULT_N, scale: float = 0.5) -> FrontCurve:
    """A tb = 1 trefoil front: four arcs, four cusps, three crossings.

    x = cos 2t sweeps the plane twice; z is chosen so that z' vanishes wherever
    x' does, which makes the slope y = z'/x' smooth (it is the y below).
    """
    t = parameter_grid(n)
    c = np.cos(2 * t)
    p = 1.0 - 4.1 * c + 5.75 * c**2
    z = scale * (np.cos(t) ** 3 * p - np.sin(t) ** 3)
    return FrontCurve(np.column_stack([c, z]))


def great_circle_j(n: int = DEFAULT_N) -> SampledLoop:
    t = parameter_grid(n)[:, None]
    return SampledLoop(Space.S3, np.cos(t) * ONE + np.sin(t) * QJ)


@functools.lru_cache(maxsize=None)
def _build(name: str) -> CatalogEntry:
    if name == "unknot-r3":
        fc = unknot_front()
        return CatalogEntry(name, lift_front(fc), 1, fc)
    if name in ("unknot-r3-stab+", "unknot-r3-stab-"):
        fc = stabilize(unknot_front(), 1 if name.endswith("+") else -1)
        return CatalogEntry(name, lift_front(fc), 1, fc)
    if name == "trefoil-r3":
        fc = trefoil_front()
        return CatalogEntry(name, lift_front(fc), -1, fc)
    if name == "greatcircle-j-s3":
        return CatalogEntry(name, great_circle_j(), 1)
    raise ValidationError(f"unknown catalog entry {name!r}; known: {', '.join(NAMES)}")


NAMES = ("unknot-r3", "unknot-r3-stab+", "unknot-r3-stab-", "trefoil-r3", "greatcircle-j-s3")

# invariants each entry is expected to have, (tb, rot)
EXPECTED = {
    "unknot-r3": (-1, 0),
    "unknot-r3-stab+": (-2, 1),
    "unknot-r3-stab-": (-2, -1),
    "trefoil-r3": (1, 0),
    "greatcircle-j-s3": (-1, 0),
}


def get(name: str) -> CatalogEntry:
    return _build(name)


def entries(space: Space | None = None) -> list[CatalogEntry]:
    out = [get(n) for n in NAMES]
    if space is not None:
        out = [e for e in out if e.loop.space is space]
    return out
