"""Loops of Legendrian embeddings and their invariants Rot_pi1 and tb_pi1."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contact import contact_residual, frame_coordinates, reeb, xi_frame, LEGENDRIAN_TOL
from .geometry import (
    MIN_SAMPLES,
    SampledLoop,
    Space,
    ValidationError,
    fine_derivative,
    fourier_resample,
    normalize,
)
from .invariants import NormalFraming, ResolutionError, framing_linking, winding_number

DEFAULT_M = 256
FRAMING_STEP = 0.5
LINKING_CHECKS = 4
ISOMETRY_TOL = 1e-9


def _slot_loop(space: Space, samples: np.ndarray) -> SampledLoop:
    return SampledLoop.trusted(space, samples)


@dataclass(frozen=True, eq=False)
class LegendrianLoop:
    """``M`` closed curves at ``theta_m = 2 pi m / M``; slot ``M`` is slot 0 again."""

    space: Space
    curves: np.ndarray

    def __post_init__(self):
        space = Space.parse(self.space)
        c = np.array(self.curves, dtype=float)
        if c.ndim != 3 or c.shape[2] != space.dim:
            raise ValidationError(f"loop curves must have shape (M, N, {space.dim}), got {c.shape}")
        if len(c) < MIN_SAMPLES:
            raise ValidationError(f"need at least {MIN_SAMPLES} theta slots, got {len(c)}")
        slots = [SampledLoop(space, s) for s in c]
        c = np.stack([s.samples for s in slots])
        for m, s in enumerate(slots):
            worst, res = contact_residual(s)
            if not worst < LEGENDRIAN_TOL:
                raise ValidationError(
                    f"slot {m} is not Legendrian: residual {worst:.3g} at sample {int(np.argmax(res))}"
                )
        _check_theta_steps(c, slots[0].diameter() / 4.0, "curve")
        c.setflags(write=False)
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "curves", c)

    @classmethod
    def trusted(cls, space: Space, curves: np.ndarray) -> "LegendrianLoop":
        """Skip validation; for loops built by maps known to preserve xi."""
        obj = object.__new__(cls)
        c = np.array(curves, dtype=float)
        c.setflags(write=False)
        object.__setattr__(obj, "space", Space.parse(space))
        object.__setattr__(obj, "curves", c)
        return obj

    @property
    def m(self) -> int:
        return len(self.curves)

    @property
    def n(self) -> int:
        return self.curves.shape[1]

    def slot(self, m: int) -> SampledLoop:
        return _slot_loop(self.space, self.curves[m % self.m])

    def thetas(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.m) / self.m


@dataclass(frozen=True, eq=False)
class FramingLoop:
    """One normal framing per slot of a LegendrianLoop."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.array(self.vectors, dtype=float)
        if v.ndim != 3:
            raise ValidationError(f"framing loop must have shape (M, N, d), got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def m(self) -> int:
        return len(self.vectors)

    def check(self, ll: LegendrianLoop, tol: float = 1e-6) -> None:
        if self.vectors.shape != ll.curves.shape:
            raise ValidationError(f"framing loop shape {self.vectors.shape} != loop shape {ll.curves.shape}")
        for m in range(self.m):
            try:
                NormalFraming(self.vectors[m]).check(ll.slot(m), tol)
            except ValidationError as exc:
                raise ValidationError(f"slot {m}: {exc}") from None
        _check_theta_steps(self.vectors, FRAMING_STEP, "framing")


def _check_theta_steps(stack: np.ndarray, limit: float, what: str) -> None:
    step = np.linalg.norm(np.roll(stack, -1, axis=0) - stack, axis=2).max(axis=1)
    if step.max() >= limit:
        m = int(np.argmax(step))
        raise ValidationError(
            f"{what} moves {step[m]:.3g} between theta slots {m} and {(m + 1) % len(stack)}; resample in theta"
        )


def _winding_in_theta(vectors: np.ndarray) -> int:
    try:
        return winding_number(vectors)
    except ResolutionError as exc:
        raise ResolutionError(str(exc).replace("resample more finely", "resample in theta")) from None


def _base_tangents(ll: LegendrianLoop) -> np.ndarray:
    """``(gamma^theta)'(0)`` for every slot, by exact trigonometric differentiation."""
    n = ll.n
    coef = np.fft.fft(ll.curves, axis=1)
    k = np.fft.fftfreq(n, 1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    v = np.real(np.einsum("k,mkd->md", 1j * k, coef)) / n
    if ll.space is Space.S3:
        p = ll.curves[:, 0]
        v = v - np.sum(v * p, 1)[:, None] * p
    return v


def rot_pi1(ll: LegendrianLoop) -> int:
    """Degree of ``theta -> (gamma^theta)'(0)`` in the frame of xi."""
    pts = ll.curves[:, 0]
    coords = frame_coordinates(ll.space, pts, _base_tangents(ll))
    return _winding_in_theta(coords)


def _in_plane_normal(space: Space, p: np.ndarray, tang: np.ndarray) -> np.ndarray:
    """Unit ``w`` in xi(p), orthogonal to the tangent, with ``(tangent, R, w)`` positive.

    Inside xi this makes ``(w, tangent)`` positive; the ordered pair ``(R, w)``
    is then an oriented basis of the normal plane.
    """
    if space is Space.S3:
        e1, e2 = xi_frame(space, p)
        a, b = np.sum(tang * e1, -1), np.sum(tang * e2, -1)
        return normalize(b[:, None] * e1 - a[:, None] * e2)
    y = p[:, 1]
    nxi = normalize(np.column_stack([-y, np.zeros_like(y), np.ones_like(y)]))
    return normalize(np.cross(tang, nxi))


def normal_plane_coordinates(ll: LegendrianLoop, vectors: np.ndarray) -> np.ndarray:
    """Coordinates of normal vectors at ``t = 0`` in the basis ``(R, w)``.

    The tangent component is solved for and dropped, so ``R`` need not be
    orthogonal to the tangent.
    """
    pts = ll.curves[:, 0]
    tang = normalize(_base_tangents(ll))
    r = reeb(ll.space, pts)
    w = _in_plane_normal(ll.space, pts, tang)
    basis = np.stack([tang, r, w], axis=-1)
    sol = np.stack([np.linalg.lstsq(b, v, rcond=None)[0] for b, v in zip(basis, vectors)])
    return sol[:, 1:]


def tb_pi1(ll: LegendrianLoop, fl: FramingLoop, linking_checks: int = LINKING_CHECKS) -> int:
    """Minus the degree of ``theta -> F^theta(0)`` in the normal basis ``(R, w)``.

    The zero-linking condition is verified on ``linking_checks`` evenly spaced
    slots; linking is constant along a continuous family, which ``fl.check``
    enforces, so that is enough.
    """
    fl.check(ll)
    for m in np.unique(np.linspace(0, ll.m, linking_checks, endpoint=False).astype(int)):
        lk = framing_linking(ll.slot(int(m)), fl.vectors[m])
        if lk != 0:
            raise ValidationError(f"slot {int(m)}: framing is not a Seifert framing (linking {lk})")
    coords = normal_plane_coordinates(ll, fl.vectors[:, 0])
    return -_winding_in_theta(coords)


# --- reparametrization and transport --------------------------------------------


def _resample_slots(stack: np.ndarray, n_new: int, sphere: bool) -> np.ndarray:
    out = np.stack([fourier_resample(s, n_new) for s in stack])
    return normalize(out) if sphere else out


def shift_grid(n: int, m: int, k: int) -> int:
    """Smallest multiple of ``n`` on which a shift by ``k theta_m`` is a whole number of samples."""
    if k == 0:
        return n
    need = m // math.gcd(m, abs(k))
    return math.lcm(n, need)


def _shift_stack(stack: np.ndarray, k: int) -> np.ndarray:
    m, n = stack.shape[:2]
    per = k * n // m
    return np.stack([np.roll(stack[j], j * per, axis=0) for j in range(m)])


def reparametrize(ll: LegendrianLoop, k: int) -> LegendrianLoop:
    """``gamma^{theta,k}(t) = gamma^theta(t - k theta)``, refining the t-grid if needed."""
    n_new = shift_grid(ll.n, ll.m, k)
    curves = ll.curves
    if n_new != ll.n:
        curves = _resample_slots(curves, n_new, ll.space is Space.S3)
    return LegendrianLoop.trusted(ll.space, _shift_stack(curves, k))


def reparametrize_framing(fl: FramingLoop, ll: LegendrianLoop, k: int) -> FramingLoop:
    """Carry a framing loop along ``reparametrize(ll, k)``."""
    n_new = shift_grid(ll.n, ll.m, k)
    vec = fl.vectors
    if n_new != ll.n:
        vec = _resample_slots(vec, n_new, False)
        pts = _resample_slots(ll.curves, n_new, ll.space is Space.S3)
        vec = np.stack([_renormalize(ll.space, p, v) for p, v in zip(pts, vec)])
    return FramingLoop(_shift_stack(vec, k))


def _renormalize(space: Space, pts: np.ndarray, vec: np.ndarray) -> np.ndarray:
    tang = normalize(fine_derivative(pts, space))
    vec = vec - np.sum(vec * tang, 1)[:, None] * tang
    if space is Space.S3:
        vec = vec - np.sum(vec * pts, 1)[:, None] * pts
    return normalize(vec)


def _check_isometries(maps: np.ndarray, d: int) -> np.ndarray:
    maps = np.asarray(maps, dtype=float)
    if maps.ndim != 3 or maps.shape[1:] != (d, d):
        raise ValidationError(f"isotopy must have shape (M, {d}, {d}), got {maps.shape}")
    gap = np.abs(np.einsum("mji,mjk->mik", maps, maps) - np.eye(d)).max(axis=(1, 2))
    if gap.max() > ISOMETRY_TOL:
        raise ValidationError(f"isotopy map {int(np.argmax(gap))} is not an isometry (error {gap.max():.3g})")
    if np.abs(maps[0] - np.eye(d)).max() > ISOMETRY_TOL:
        raise ValidationError("isotopy must start at the identity")
    return maps


def apply_isotopy(loop: SampledLoop, maps) -> LegendrianLoop:
    """Images of a curve under a family of linear isometries, as a loop of slots."""
    maps = _check_isometries(maps, loop.space.dim)
    curves = np.einsum("mij,nj->mni", maps, loop.samples)
    return LegendrianLoop(loop.space, curves)


def transport_framing(loop: SampledLoop, base: NormalFraming, maps) -> FramingLoop:
    """Push a framing of ``loop`` along a family of linear isometries.

    Each slot is the image of ``base`` under the map, reprojected to the normal
    plane of the image curve and renormalized.
    """
    maps = _check_isometries(maps, loop.space.dim)
    base.check(loop)
    vec = np.einsum("mij,nj->mni", maps, np.asarray(base.vectors, dtype=float))
    pts = np.einsum("mij,nj->mni", maps, loop.samples)
    return FramingLoop(np.stack([_renormalize(loop.space, p, v) for p, v in zip(pts, vec)]))


def constant_loop(loop: SampledLoop, m: int = DEFAULT_M) -> LegendrianLoop:
    return LegendrianLoop(loop.space, np.repeat(loop.samples[None], m, axis=0))


def concatenate(a: LegendrianLoop, b: LegendrianLoop) -> LegendrianLoop:
    """Run ``a`` then ``b``; both must be based at the same curve."""
    if a.curves.shape[1:] != b.curves.shape[1:] or a.space is not b.space:
        raise ValidationError("loops must share space and t-grid")
    if np.abs(a.curves[0] - b.curves[0]).max() > 1e-9:
        raise ValidationError("loops must start at the same curve")
    return LegendrianLoop.trusted(a.space, np.concatenate([a.curves, b.curves]))


def reverse_theta(ll: LegendrianLoop) -> LegendrianLoop:
    """The same loop run backwards in theta, still starting at slot 0."""
    return LegendrianLoop.trusted(ll.space, np.roll(ll.curves[::-1], 1, axis=0))


def refine_theta(ll: LegendrianLoop, factor: int = 2) -> LegendrianLoop:
    """Trigonometric interpolation to ``factor * M`` slots."""
    c = fourier_resample(ll.curves, factor * ll.m)
    if ll.space is Space.S3:
        c = normalize(c)
    return LegendrianLoop(ll.space, c)
