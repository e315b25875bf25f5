"""Front and Lagrangian projections of R^3 curves and their Legendrian lifts."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    MIN_SAMPLES,
    SampledLoop,
    Space,
    ValidationError,
    fine_derivative,
    fourier_resample,
    parameter_grid,
    refinement_factor,
)

CUSP_THRESHOLD = 1e-4
CUSP_LIMIT_TOL = 1e-3
VERTICAL_Z_FRACTION = 1e-2
CLOSURE_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 2 or s.shape[1] != 2:
            raise ValidationError(f"planar samples must have shape (N, 2), got {s.shape}")
        if len(s) < MIN_SAMPLES:
            raise ValidationError(f"need at least {MIN_SAMPLES} samples, got {len(s)}")
        if not np.all(np.isfinite(s)):
            raise ValidationError("planar samples contain non-finite entries")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def n(self) -> int:
        return len(self.samples)


@dataclass(frozen=True, eq=False)
class FrontCurve(PlanarCurve):
    """Front in the (x, z) plane; ``cusps`` are sample indices, recomputed on build."""

    cusps: tuple = ()

    def __post_init__(self):
        super().__post_init__()
        object.__setattr__(self, "cusps", tuple(_front_analysis(self.samples)[1]))


def project(loop: SampledLoop, mode: str) -> PlanarCurve:
    """Lagrangian ``(x, y)`` or front ``(x, z)`` projection, sample-aligned."""
    if loop.space is not Space.R3:
        raise ValidationError("projections need an R^3 curve; apply stereographic() first")
    s = loop.samples
    if mode == "lagrangian":
        return PlanarCurve(s[:, :2])
    if mode == "front":
        return FrontCurve(s[:, [0, 2]])
    raise ValidationError(f"unknown projection mode {mode!r}")


def signed_area(pc: PlanarCurve) -> float:
    """Shoelace area of the sample polygon; positive for counterclockwise curves.

    Summed with ``math.fsum`` so reversing orientation negates the result exactly.
    """
    x, y = pc.samples[:, 0], pc.samples[:, 1]
    terms = x * np.roll(y, -1) - np.roll(x, -1) * y
    return 0.5 * math.fsum(terms)


def spectral_derivative(values: np.ndarray) -> np.ndarray:
    n = len(values)
    coef = np.fft.rfft(values, axis=0)
    k = np.fft.rfftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[-1] = 0.0
    shape = (-1,) + (1,) * (values.ndim - 1)
    return np.fft.irfft(1j * k.reshape(shape) * coef, n=n, axis=0)


def spectral_antiderivative(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Periodic antiderivative (zero at index 0) and the mean of ``values``."""
    n = len(values)
    coef = np.fft.rfft(values)
    mean = coef[0].real / n
    k = np.fft.rfftfreq(n, 1.0 / n)
    out = np.zeros_like(coef)
    out[1:] = coef[1:] / (1j * k[1:])
    if n % 2 == 0:
        out[-1] = 0.0
    anti = np.fft.irfft(out, n=n)
    return anti - anti[0], mean


@dataclass(frozen=True, eq=False)
class LagrangianLift:
    """Result of lifting a planar curve; ``loop`` is None unless the lift closes."""

    samples: np.ndarray
    closure_defect: float
    loop: SampledLoop | None

    def __iter__(self):
        return iter((self.loop, self.closure_defect))


def lift_lagrangian(pc: PlanarCurve, z0: float = 0.0) -> LagrangianLift:
    """Recover z from ``z' = y x'``.

    The reported closure defect is the trapezoid sum of ``y dx`` over the sample
    polygon, which equals minus the shoelace area exactly.  Whether the lift
    closes is decided by the drift of the spectral z, which is far more accurate.  The z samples themselves come
    from the spectral antiderivative so the lift is Legendrian to high accuracy.
    """
    s = pc.samples
    steps = np.linalg.norm(np.roll(s, -1, axis=0) - s, axis=1)
    if np.any(steps == 0.0):
        raise ValidationError(f"vanishing tangent at sample {int(np.argmin(steps))}")
    x, y = s[:, 0], s[:, 1]
    dx = np.roll(x, -1) - x
    defect = math.fsum(0.5 * (y + np.roll(y, -1)) * dx)

    r = refinement_factor(len(s))
    fine = fourier_resample(s, r * len(s))
    g = fine[:, 1] * spectral_derivative(fine[:, 0])
    anti, mean = spectral_antiderivative(g)
    t = parameter_grid(len(fine))
    z = z0 + anti + mean * t
    samples = np.column_stack([x, y, z[::r]])

    # closure is judged on the spectral drift of z, which is exact for the
    # interpolated curve; the polygon defect is O(h^2) near sharp zigzags
    drift = 2.0 * np.pi * mean
    diam = float(np.ptp(s, axis=0).max())
    loop = None
    if abs(drift) < CLOSURE_TOL * max(diam, 1e-300):
        loop = SampledLoop(Space.R3, samples)
    return LagrangianLift(samples, defect, loop)


def _front_analysis(samples: np.ndarray):
    """Derivatives, cusp indices and slope ``y = z'/x'`` of a front."""
    v = _planar_fine_derivative(samples)
    xd, zd = v[:, 0], v[:, 1]
    speed = float(np.hypot(xd, zd).max())
    thr = CUSP_THRESHOLD * speed
    n = len(samples)

    small_x = np.abs(xd) <= thr
    small_z = np.abs(zd) <= thr
    vertical = small_x & ~small_z
    if np.any(vertical):
        raise ValidationError(f"vertical tangency at sample {int(np.argmax(vertical))}")
    cusps = set(np.nonzero(small_x & small_z)[0].tolist())
    sign = np.sign(xd)
    nxt = np.roll(np.arange(n), -1)
    flips = np.nonzero((sign * sign[nxt] < 0) & ~small_x & ~small_x[nxt])[0]
    for i in flips:
        j = int(nxt[i])
        cusps.add(int(i) if abs(xd[i]) <= abs(xd[j]) else j)
    cusps = sorted(cusps)

    with np.errstate(divide="ignore", invalid="ignore"):
        q = zd / xd
    y = q.copy()
    for c in cusps:
        # quadratic extrapolation of the slope from each side
        left = 3.0 * q[(c - 1) % n] - 3.0 * q[(c - 2) % n] + q[(c - 3) % n]
        right = 3.0 * q[(c + 1) % n] - 3.0 * q[(c + 2) % n] + q[(c + 3) % n]
        agree = abs(left - right) <= CUSP_LIMIT_TOL * max(1.0, abs(left), abs(right))
        if not (np.isfinite(left) and np.isfinite(right) and agree):
            if abs(zd[c]) > VERTICAL_Z_FRACTION * speed and left * right < 0:
                raise ValidationError(f"vertical tangency at sample {c}")
            raise ValidationError(f"ill-defined cusp at sample {c}: one-sided slopes {left:.4g}, {right:.4g}")
        if small_x[c]:
            y[c] = 0.5 * (left + right)
    return v, cusps, y


def _planar_fine_derivative(samples: np.ndarray) -> np.ndarray:
    padded = np.column_stack([samples[:, 0], np.zeros(len(samples)), samples[:, 1]])
    v = fine_derivative(padded, Space.R3)
    return v[:, [0, 2]]


def front_slopes(fc: FrontCurve) -> np.ndarray:
    return _front_analysis(fc.samples)[2]


def lift_front(fc: FrontCurve) -> SampledLoop:
    """Legendrian lift ``y = z'/x'`` of a front; at cusps the mean of the one-sided limits."""
    y = front_slopes(fc)
    s = fc.samples
    return SampledLoop(Space.R3, np.column_stack([s[:, 0], y, s[:, 1]]))


# --- stabilization -----------------------------------------------------------


def _host_arc(xd: np.ndarray, min_len: int = 16) -> tuple[int, int]:
    """Center and length of the longest run where x' keeps a sign away from zero."""
    n = len(xd)
    key = np.where(np.abs(xd) > 0.05 * np.abs(xd).max(), np.sign(xd), 0.0)
    changes = np.nonzero(key != np.roll(key, 1))[0]
    if len(changes) == 0:
        if key[0] == 0:
            raise ValidationError("front has no smooth arc")
        return 0, n
    shift = int(changes[0])
    best_start, best_len, pos = 0, 0, 0
    for value, group in itertools.groupby(np.roll(key, -shift)):
        size = len(list(group))
        if value != 0 and size > best_len:
            best_start, best_len = pos, size
        pos += size
    if best_len < min_len:
        raise ValidationError(f"no smooth non-cusp arc of at least {min_len} samples to stabilize")
    return (shift + best_start + best_len // 2) % n, best_len


def stabilize(fc: FrontCurve, sign: int) -> FrontCurve:
    """Insert a zigzag (two new cusps) into the longest smooth arc of a front.

    ``sign`` sets the sense of the zigzag; the rotation number of the lift moves
    by ``sign`` and its Thurston-Bennequin number drops by one.
    """
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    n = fc.n
    loop = lift_front(fc)
    xd = _planar_fine_derivative(fc.samples)[:, 0]
    center, length = _host_arc(xd)
    sigma = float(np.sign(xd[center]))

    r = refinement_factor(n)
    fine = fourier_resample(loop.samples, r * n)
    t = parameter_grid(r * n)
    tc = 2.0 * np.pi * center / n
    width = (2.0 * np.pi * length / n) / 16.0
    kappa = 1.0 / width**2

    def bump(shift=0.0):
        return np.exp(kappa * (np.cos(t - tc - shift) - 1.0))

    u = np.sin(t - tc)
    speed = abs(xd[center])
    # x backtracks near tc: d/dt(-u * bump) = -1 at the center
    x_new = fine[:, 0] - sigma * 2.5 * speed * u * bump()
    xdn = spectral_derivative(x_new)

    # the kink must dominate the host's own y' so the Lagrangian tangent turns once
    window = bump() > 1e-3
    local_slope = float(np.abs(spectral_derivative(fine[:, 1]))[window].max())
    yscale = max(float(np.abs(fine[:, 1]).max()), 0.1 * float(np.ptp(fine[:, 0])))
    amp = max(0.5 * yscale, 6.0 * width * local_slope)
    kink = sign * sigma * amp * bump()
    flank = bump(3.0 * width) + bump(-3.0 * width)
    base = (fine[:, 1] + kink) * xdn
    c = -base.sum() / (flank * xdn).sum()
    y_new = fine[:, 1] + kink + c * flank

    anti, _ = spectral_antiderivative(y_new * xdn)
    far = (center + n // 2) % n
    z_new = loop.samples[far, 2] + anti - anti[far * r]
    return FrontCurve(np.column_stack([x_new[::r], z_new[::r]]))
