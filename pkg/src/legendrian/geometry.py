"""Sampled closed curves, quaternion algebra and stereographic charts.

Curves are stored as ``(N, d)`` float arrays sampled at ``t_n = 2*pi*n/N``,
``n = 0..N-1``; the endpoint ``t = 2*pi`` is never stored, closure is implicit.
Points of S^3 are quaternions ``w + x i + y j + z k`` stored as ``[w, x, y, z]``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.signal import resample as _fourier_resample

MIN_SAMPLES = 16
DEFAULT_N = 512
UNIT_TOL = 1e-9
POLE_CLEARANCE = 0.05


class ValidationError(ValueError):
    """Input data violates a documented invariant."""


class Space(enum.Enum):
    """Ambient contact manifold of a curve."""

    R3 = "r3"
    S3 = "s3"

    @property
    def dim(self) -> int:
        return 3 if self is Space.R3 else 4

    @classmethod
    def parse(cls, value) -> "Space":
        if isinstance(value, Space):
            return value
        text = str(value).lower()
        aliases = {"r3": cls.R3, "r3std": cls.R3, "s3": cls.S3, "s3std": cls.S3}
        if text not in aliases:
            raise ValidationError(f"unknown space {value!r}")
        return aliases[text]


# --- quaternions -----------------------------------------------------------

ONE = np.array([1.0, 0.0, 0.0, 0.0])
QI = np.array([0.0, 1.0, 0.0, 0.0])
QJ = np.array([0.0, 0.0, 1.0, 0.0])
QK = np.array([0.0, 0.0, 0.0, 1.0])


def qmul(p, q) -> np.ndarray:
    """Hamilton product, broadcasting over leading axes."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = np.array(q, dtype=float)
    q[..., 1:] *= -1.0
    return q


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def left_matrix(q) -> np.ndarray:
    """4x4 matrix of ``x -> q x``."""
    return np.stack([qmul(q, e) for e in np.eye(4)], axis=-1)


def right_matrix(q) -> np.ndarray:
    """4x4 matrix of ``x -> x q``."""
    return np.stack([qmul(e, q) for e in np.eye(4)], axis=-1)


def to_c2(q) -> np.ndarray:
    """Quaternion ``z1 + z2 j`` to the complex pair ``(z1, z2)``."""
    q = np.asarray(q, dtype=float)
    return np.stack([q[..., 0] + 1j * q[..., 1], q[..., 2] + 1j * q[..., 3]], axis=-1)


def from_c2(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.stack([z[..., 0].real, z[..., 0].imag, z[..., 1].real, z[..., 1].imag], axis=-1)


# --- sampled loops ---------------------------------------------------------


def parameter_grid(n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(n) / n


def _nonadjacent_min_distance(samples: np.ndarray) -> tuple[float, int, int]:
    """Closest pair of samples that are not neighbours on the loop.

    At most two of any sample's three nearest others are its neighbours, so a
    k=4 tree query (self included) always contains the nearest non-neighbour.
    """
    n = len(samples)
    dist, idx = cKDTree(samples).query(samples, k=min(4, n))
    rows = np.arange(n)[:, None]
    gap = np.abs(idx - rows)
    gap = np.minimum(gap, n - gap)
    dist = np.where(gap >= 2, dist, np.inf)
    flat = int(np.argmin(dist))
    i, c = divmod(flat, dist.shape[1])
    return float(dist[i, c]), int(i), int(idx[i, c])


@dataclass(frozen=True, eq=False)
class SampledLoop:
    """A closed curve sampled on the uniform grid ``t_n = 2 pi n / N``."""

    space: Space
    samples: np.ndarray

    def __post_init__(self):
        space = Space.parse(self.space)
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 2 or samples.shape[1] != space.dim:
            raise ValidationError(
                f"{space.value} samples must have shape (N, {space.dim}), got {samples.shape}"
            )
        if len(samples) < MIN_SAMPLES:
            raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {len(samples)}")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples contain non-finite entries")
        if space is Space.S3:
            norms = np.linalg.norm(samples, axis=1)
            if np.any(norms < 0.5):
                raise ValidationError(f"sample {int(np.argmin(norms))} is far from S^3")
            samples = samples / norms[:, None]
        steps = np.linalg.norm(samples - np.roll(samples, -1, axis=0), axis=1)
        if np.any(steps == 0.0):
            raise ValidationError(f"consecutive samples coincide at index {int(np.argmin(steps))}")
        dmin, i, j = _nonadjacent_min_distance(samples)
        if not dmin > 0.0:
            raise ValidationError(f"curve is not embedded: samples {i} and {j} coincide")
        samples.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def trusted(cls, space: Space, samples: np.ndarray) -> "SampledLoop":
        """Build without validation; for outputs of structure-preserving maps."""
        obj = object.__new__(cls)
        samples = np.array(samples, dtype=float)
        samples.setflags(write=False)
        object.__setattr__(obj, "space", Space.parse(space))
        object.__setattr__(obj, "samples", samples)
        return obj

    @property
    def n(self) -> int:
        return len(self.samples)

    @property
    def t(self) -> np.ndarray:
        return parameter_grid(self.n)

    def shifted(self, k: int) -> "SampledLoop":
        """Cyclic relabelling: sample ``n`` of the result is sample ``n + k``."""
        return SampledLoop.trusted(self.space, np.roll(self.samples, -k, axis=0))

    def reversed(self) -> "SampledLoop":
        return SampledLoop.trusted(self.space, np.roll(self.samples[::-1], 1, axis=0))

    def diameter(self) -> float:
        s = self.samples
        return float(max(np.ptp(s, axis=0).max(), 1e-300))

    def min_nonadjacent_distance(self) -> float:
        return _nonadjacent_min_distance(self.samples)[0]


def fd4(values: np.ndarray, period: float = 2.0 * np.pi) -> np.ndarray:
    """Fourth-order central difference of periodic samples along axis 0."""
    h = period / len(values)
    return (
        -np.roll(values, -2, axis=0)
        + 8.0 * np.roll(values, -1, axis=0)
        - 8.0 * np.roll(values, 1, axis=0)
        + np.roll(values, 2, axis=0)
    ) / (12.0 * h)


def project_tangent_s3(points: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    return vectors - np.sum(vectors * points, axis=-1, keepdims=True) * points


def derivative(loop: SampledLoop) -> np.ndarray:
    """Tangent field d(loop)/dt by fourth-order central differences.

    For S^3 loops the result is projected onto the tangent space of the sphere.
    """
    v = fd4(loop.samples)
    if loop.space is Space.S3:
        v = project_tangent_s3(loop.samples, v)
    return v


def fourier_resample(values: np.ndarray, n_new: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if n_new == len(values):
        return values.copy()
    return _fourier_resample(values, n_new, axis=0)


def resample(loop: SampledLoop, n_new: int) -> SampledLoop:
    """Band-limited (trigonometric) interpolation onto a uniform ``n_new`` grid."""
    if n_new < MIN_SAMPLES:
        raise ValidationError(f"cannot resample to {n_new} < {MIN_SAMPLES} samples")
    samples = fourier_resample(loop.samples, n_new)
    return SampledLoop(loop.space, samples)


def refinement_factor(n: int, target: int = 8192) -> int:
    return max(1, -(-target // n))


def refine(samples: np.ndarray, space: Space, target: int = 8192) -> tuple[np.ndarray, int]:
    """Trigonometric refinement to at least ``target`` points; returns (points, factor)."""
    r = refinement_factor(len(samples), target)
    fine = fourier_resample(samples, r * len(samples))
    if space is Space.S3:
        fine = normalize(fine)
    return fine, r


def fine_derivative(
    samples: np.ndarray, space: Space, target: int = 8192, keep_fine: bool = False
):
    """Derivative evaluated on a trigonometrically refined grid, read back at the samples.

    Used where the fd4 truncation error at the native resolution would dominate a
    tolerance (contact residuals, front lifts).  With ``keep_fine`` the refined
    points and derivatives are returned instead.
    """
    fine, r = refine(samples, space, target)
    v = fd4(fine)
    if space is Space.S3:
        v = project_tangent_s3(fine, v)
    if keep_fine:
        return fine, v
    return v[::r]


# --- stereographic charts --------------------------------------------------


def _to_south(pole) -> np.ndarray:
    """Unit quaternion ``c`` with ``pole * c = -1``; right multiplication preserves xi."""
    return -qconj(pole)


def stereographic_points(points: np.ndarray, pole) -> np.ndarray:
    """Map S^3 points to R^3 with ``pole`` sent to infinity (no clearance check)."""
    pole = normalize(pole)
    q = qmul(points, _to_south(pole))
    return q[..., 1:] / (1.0 + q[..., :1])


def stereographic(loop: SampledLoop, pole) -> SampledLoop:
    """Stereographic image of an S^3 loop in R^3.

    The sphere is first rotated by right multiplication so that ``pole`` goes to
    ``-1``; then ``q -> (q_x, q_y, q_z) / (1 + q_w)``.
    """
    if loop.space is not Space.S3:
        raise ValidationError("stereographic projection needs an S^3 loop")
    pole = np.asarray(pole, dtype=float)
    if pole.shape != (4,) or abs(np.linalg.norm(pole) - 1.0) > UNIT_TOL:
        raise ValidationError("pole must be a unit quaternion")
    dist = np.linalg.norm(loop.samples - pole, axis=1)
    bad = int(np.argmin(dist))
    if dist[bad] <= POLE_CLEARANCE:
        raise ValidationError(
            f"pole too close to the curve: sample {bad} at distance {dist[bad]:.3g}"
        )
    return SampledLoop(Space.R3, stereographic_points(loop.samples, pole))


def inverse_stereographic_points(points: np.ndarray, pole) -> np.ndarray:
    pole = normalize(pole)
    x = np.asarray(points, dtype=float)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    q = np.concatenate([(1.0 - r2), 2.0 * x], axis=-1) / (1.0 + r2)
    return qmul(q, qconj(_to_south(pole)))


def inverse_stereographic(loop: SampledLoop, pole) -> SampledLoop:
    if loop.space is not Space.R3:
        raise ValidationError("inverse stereographic projection needs an R^3 loop")
    return SampledLoop(Space.S3, inverse_stereographic_points(loop.samples, pole))


def lattice_poles() -> np.ndarray:
    dirs = [d for d in itertools.product((-1.0, 0.0, 1.0), repeat=4) if any(d)]
    return normalize(np.array(dirs))


def choose_pole(*loops: SampledLoop) -> np.ndarray:
    """Lattice direction on S^3 farthest from every sample of the given loops."""
    pts = np.concatenate([lp.samples for lp in loops], axis=0)
    poles = lattice_poles()
    clearance = np.array([np.linalg.norm(pts - p, axis=1).min() for p in poles])
    return poles[int(np.argmax(clearance))]
