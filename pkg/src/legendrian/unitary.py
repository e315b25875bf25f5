"""U(2) acting on S^3, orbit loops A_theta^m, and the sphere of great circles.

C^2 is identified with the quaternions by ``(z1, z2) <-> z1 + z2 j``; the complex
structure is left multiplication by ``i``, so right multiplications are unitary.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation
from scipy.stats import unitary_group

from .contact import require_legendrian
from .geometry import (
    DEFAULT_N,
    ONE,
    QI,
    QJ,
    QK,
    SampledLoop,
    Space,
    ValidationError,
    from_c2,
    parameter_grid,
    qconj,
    qmul,
    to_c2,
)
from .invariants import NormalFraming, winding_number
from .loops import DEFAULT_M, FramingLoop, LegendrianLoop, normal_plane_coordinates

log = logging.getLogger(__name__)

UNITARY_TOL = 1e-12
EQUATOR_TOL = 1e-9
FRAME_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Unitary2:
    matrix: np.ndarray

    def __post_init__(self):
        u = np.array(self.matrix, dtype=complex)
        if u.shape != (2, 2):
            raise ValidationError(f"unitary must be 2x2, got {u.shape}")
        gap = np.abs(u.conj().T @ u - np.eye(2)).max()
        if gap > UNITARY_TOL:
            raise ValidationError(f"matrix is not unitary (U*U - I = {gap:.3g})")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return Unitary2(self.matrix @ other.matrix)

    def real(self) -> "Rotation4":
        """The same map on R^4 in the basis (1, i, j, k)."""
        cols = [from_c2(self.matrix @ to_c2(e)) for e in np.eye(4)]
        return Rotation4(np.stack(cols, axis=1))

    @classmethod
    def identity(cls) -> "Unitary2":
        return cls(np.eye(2))

    @classmethod
    def diag_phase(cls, angle: float) -> "Unitary2":
        """``A_angle = diag(1, e^{i angle})``."""
        return cls(np.diag([1.0, np.exp(1j * angle)]))

    @classmethod
    def right_multiplication(cls, q) -> "Unitary2":
        """``x -> x q`` for a unit quaternion ``q``."""
        q = np.asarray(q, dtype=float)
        cols = [to_c2(qmul(e, q)) for e in (ONE, QJ)]
        return cls(np.stack(cols, axis=1))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Unitary2":
        return cls(unitary_group.rvs(2, random_state=rng))


@dataclass(frozen=True, eq=False)
class Rotation4:
    matrix: np.ndarray

    def __post_init__(self):
        r = np.array(self.matrix, dtype=float)
        if r.shape != (4, 4):
            raise ValidationError(f"rotation must be 4x4, got {r.shape}")
        gap = np.abs(r.T @ r - np.eye(4)).max()
        if gap > UNITARY_TOL or abs(np.linalg.det(r) - 1.0) > UNITARY_TOL:
            raise ValidationError(f"matrix is not a rotation (R^T R - I = {gap:.3g})")
        r.setflags(write=False)
        object.__setattr__(self, "matrix", r)

    def __call__(self, q) -> np.ndarray:
        return np.asarray(q, dtype=float) @ self.matrix.T


def act(u: Unitary2, loop: SampledLoop) -> SampledLoop:
    """``U . gamma`` sample by sample."""
    if loop.space is not Space.S3:
        raise ValidationError("the unitary action needs an S^3 loop")
    z = to_c2(loop.samples) @ u.matrix.T
    return SampledLoop(Space.S3, from_c2(z))


def base_at_one(loop: SampledLoop) -> tuple[SampledLoop, Unitary2]:
    """Rotate ``loop`` by a unitary so that ``loop(0) = (1, 0)``."""
    v = Unitary2.right_multiplication(qconj(loop.samples[0]))
    return act(v, loop), v


def orbit_maps(m: int, num_theta: int) -> np.ndarray:
    """Real 4x4 matrices of ``A_{theta}^m`` on the theta grid."""
    return np.stack([Unitary2.diag_phase(m * th).real().matrix for th in parameter_grid(num_theta)])


def a_theta_loop(m: int, loop: SampledLoop, num_theta: int = DEFAULT_M) -> LegendrianLoop:
    """Loop ``theta -> A_theta^m . gamma``, after moving ``gamma(0)`` to ``(1, 0)``."""
    require_legendrian(loop)
    base, _ = base_at_one(loop)
    z = to_c2(base.samples)
    phases = np.exp(1j * m * parameter_grid(num_theta))
    curves = np.stack([from_c2(np.column_stack([z[:, 0], ph * z[:, 1]])) for ph in phases])
    return LegendrianLoop(Space.S3, curves)


def spin_lift(maps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Continuous unit quaternion pairs ``(a, b)`` with ``R(x) = a x conj(b)``.

    ``maps`` runs over a closed loop of rotations including the endpoint.
    """
    pairs_a, pairs_b = [], []
    for r in np.asarray(maps, dtype=float):
        c = r @ ONE
        # conj(c) R(x) = b x conj(b) is a rotation of the imaginary quaternions
        inner = np.stack([qmul(qconj(c), r @ e)[1:] for e in (QI, QJ, QK)], axis=1)
        x, y, z, w = Rotation.from_matrix(inner).as_quat()
        b = np.array([w, x, y, z])
        a = qmul(c, b)
        if pairs_b and np.dot(b, pairs_b[-1]) + np.dot(a, pairs_a[-1]) < 0:
            a, b = -a, -b
        pairs_a.append(a)
        pairs_b.append(b)
    return np.array(pairs_a), np.array(pairs_b)


def spin_lift_closes(m: int, num_theta: int = DEFAULT_M, tol: float = 1e-9) -> bool:
    """Whether the rotation loop ``A_theta^m`` lifts to a closed loop in S^3 x S^3."""
    thetas = 2.0 * np.pi * np.arange(num_theta + 1) / num_theta
    maps = np.stack([Unitary2.diag_phase(m * th).real().matrix for th in thetas])
    a, b = spin_lift(maps)
    return bool(np.abs(a[-1] - a[0]).max() < tol and np.abs(b[-1] - b[0]).max() < tol)


# --- the sphere of great circles ---------------------------------------------------


def great_circle(p, n: int = DEFAULT_N) -> SampledLoop:
    """``gamma_p(t) = cos t + p sin t`` for a unit imaginary quaternion ``p``."""
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or abs(p[0]) > EQUATOR_TOL or abs(np.linalg.norm(p) - 1.0) > EQUATOR_TOL:
        raise ValidationError("p must be a unit imaginary quaternion")
    t = parameter_grid(n)[:, None]
    return SampledLoop(Space.S3, np.cos(t) * ONE + np.sin(t) * p)


def equator_point(phi: float) -> np.ndarray:
    return np.cos(phi) * QJ + np.sin(phi) * QK


def _equator_angle(p) -> float:
    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or abs(p[0]) > EQUATOR_TOL or abs(p[1]) > EQUATOR_TOL:
        raise ValidationError("p must lie on the (j, k) equator")
    if abs(np.linalg.norm(p) - 1.0) > EQUATOR_TOL:
        raise ValidationError("p must be a unit quaternion")
    return float(np.arctan2(p[3], p[2]))


def plane_rotation(u, v, angle: float) -> np.ndarray:
    """Rotation by ``angle`` in the oriented plane ``(u, v)``, identity on its complement."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return (
        np.eye(4)
        + (c - 1.0) * (np.outer(u, u) + np.outer(v, v))
        + s * (np.outer(v, u) - np.outer(u, v))
    )


def a_pr(p, r: float) -> Rotation4:
    """Rotation by ``pi r / 2`` fixing ``<1, i p>`` and turning ``i`` towards ``p``."""
    if not 0.0 <= r <= 1.0:
        raise ValidationError(f"r must lie in [0, 1], got {r}")
    _equator_angle(p)
    return Rotation4(plane_rotation(QI, np.asarray(p, dtype=float), 0.5 * np.pi * r))


def _south_rotation(p) -> np.ndarray:
    """Quarter turn fixing ``<1, -i p>`` and taking ``-i`` to ``p``."""
    return plane_rotation(-QI, np.asarray(p, dtype=float), 0.5 * np.pi)


def _validated(vectors: np.ndarray, loop: SampledLoop, p: np.ndarray, label: str) -> np.ndarray:
    """Check a raw frame leg along ``gamma_p``; Gram-Schmidt it if it is off."""
    pts = loop.samples
    t = loop.t[:, None]
    tang = -np.sin(t) * ONE + np.cos(t) * p
    raw = np.asarray(vectors, dtype=float)
    fixed = raw - np.sum(raw * pts, 1)[:, None] * pts
    fixed = fixed - np.sum(fixed * tang, 1)[:, None] * tang
    fixed = fixed / np.linalg.norm(fixed, axis=1)[:, None]
    dev = float(np.abs(fixed - raw).max())
    if dev > FRAME_TOL:
        log.warning("%s: raw frame leg deviates by %.3g; Gram-Schmidt corrected", label, dev)
        return fixed
    return raw


def tau_framings(p, variant: str = "north", n: int = DEFAULT_N) -> NormalFraming:
    """First leg of the framing family along ``gamma_p``, ``p = cos(phi) j + sin(phi) k``.

    ``north`` evaluates the printed frame formula
    ``(cos phi) i + sin phi ((sin phi) j - (cos phi) k)``.  ``south`` transports
    ``tau_{-i} = <-j, -k>`` by the quarter turn fixing ``<1, -i p>``.
    ``north-transported`` transports ``tau_i = <j, k>`` by ``A_{p,1}``; it is a
    diagnostic, not part of the printed construction.
    """
    phi = _equator_angle(p)
    p = np.asarray(p, dtype=float)
    loop = great_circle(p, n)
    if variant == "north":
        leg = np.cos(phi) * QI + np.sin(phi) * (np.sin(phi) * QJ - np.cos(phi) * QK)
    elif variant == "south":
        leg = _south_rotation(p) @ (-QJ)
    elif variant == "north-transported":
        leg = a_pr(p, 1.0).matrix @ QJ
    else:
        raise ValidationError(f"unknown framing variant {variant!r}")
    vec = _validated(np.repeat(leg[None], n, axis=0), loop, p, f"tau_{variant}(phi={phi:.4g})")
    framing = NormalFraming(vec)
    framing.check(loop)
    return framing


def equator_loop(num_theta: int = DEFAULT_M, n: int = DEFAULT_N) -> LegendrianLoop:
    """The loop of great circles ``gamma_p``, ``p`` running once around the equator."""
    curves = [great_circle(equator_point(phi), n).samples for phi in parameter_grid(num_theta)]
    return LegendrianLoop(Space.S3, np.stack(curves))


def equator_framings(variant: str, num_theta: int = DEFAULT_M, n: int = DEFAULT_N) -> FramingLoop:
    return FramingLoop(
        np.stack([tau_framings(equator_point(phi), variant, n).vectors for phi in parameter_grid(num_theta)])
    )


def d_sphere_equator(
    num_theta: int = DEFAULT_M,
    n: int = 64,
    north: str = "north",
    south: str = "south",
    south_twist: int = 0,
) -> int:
    """Degree difference of the south and north framing families at ``t = 0``.

    Both families are read in the basis ``(R, w)`` of the normal plane of
    ``gamma_p`` at ``1``; the result is the winding of south relative to north.
    ``south_twist`` replaces the south family by the north one turned ``south_twist``
    extra times around the equator, to inject a known answer.
    """
    if num_theta < 64:
        raise ValidationError(f"need at least 64 equator samples, got {num_theta}")
    ll = equator_loop(num_theta, n)
    zn = _complex(normal_plane_coordinates(ll, equator_framings(north, num_theta, n).vectors[:, 0]))
    if south_twist:
        zs = zn * np.exp(1j * south_twist * parameter_grid(num_theta))
    else:
        zs = _complex(normal_plane_coordinates(ll, equator_framings(south, num_theta, n).vectors[:, 0]))
    rel = zs * np.conj(zn)
    return winding_number(np.column_stack([rel.real, rel.imag]))


def _complex(coords: np.ndarray) -> np.ndarray:
    return coords[:, 0] + 1j * coords[:, 1]
