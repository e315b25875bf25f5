"""Classical invariants of Legendrian knots.

Conventions: R^3 is oriented by dx^dy^dz and S^3 by its contact form
(alpha ^ d alpha > 0; stereographic charts preserve this orientation).  xi is
oriented by the frame ``(e1, e2)``.  Crossing signs follow the right-hand rule
and the signed crossing count is the reference for every sign below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.ndimage import maximum_filter1d

from .contact import LEGENDRIAN_TOL, frame_coordinates, is_legendrian, reeb, require_legendrian
from .geometry import (
    SampledLoop,
    Space,
    ValidationError,
    choose_pole,
    fine_derivative,
    normalize,
    stereographic_points,
)

WINDING_GUARD = 0.05
GAUSS_GUARD = 0.1
MAX_DIRECTION_TRIES = 50
MIN_LINK_DISTANCE = 1e-4
POLYGON_TOUCH = 1e-6


class ResolutionError(ValidationError):
    """Sampling too coarse for a robust integer answer."""


# --- degree ------------------------------------------------------------------


def winding_number(vectors) -> int:
    """Degree of a closed loop of nonzero planar vectors.

    Consecutive angular increments (wrapped to (-pi, pi]) must stay below pi/2.
    """
    v = np.asarray(vectors, dtype=float)
    norms = np.hypot(v[:, 0], v[:, 1])
    if np.any(norms == 0.0):
        raise ValidationError(f"zero vector at index {int(np.argmin(norms))}")
    angle = np.arctan2(v[:, 1], v[:, 0])
    inc = np.diff(np.append(angle, angle[0]))
    inc = -((-inc + np.pi) % (2.0 * np.pi) - np.pi)  # wrap into (-pi, pi]
    worst = int(np.argmax(np.abs(inc)))
    if abs(inc[worst]) >= np.pi / 2:
        raise ResolutionError(
            f"angular increment {inc[worst]:.3f} rad at index {worst}; resample more finely"
        )
    total = math.fsum(inc) / (2.0 * np.pi)
    k = round(total)
    if abs(total - k) >= WINDING_GUARD:
        raise ResolutionError(f"winding sum {total:.4f} is not close to an integer")
    return int(k)


def rot(loop: SampledLoop, tol: float = LEGENDRIAN_TOL) -> int:
    """Rotation number: degree of the tangent in the frame of xi."""
    require_legendrian(loop, tol)
    pts, v = fine_derivative(loop.samples, loop.space, keep_fine=True)
    return winding_number(frame_coordinates(loop.space, pts, v))


# --- linking numbers ---------------------------------------------------------


def _as_r3_pair(a: SampledLoop, b: SampledLoop, pole=None) -> tuple[np.ndarray, np.ndarray]:
    if a.space is not b.space:
        raise ValidationError("linking number needs two loops in the same space")
    if a.space is Space.R3:
        return a.samples, b.samples
    if pole is None:
        pole = choose_pole(a, b)
    return stereographic_points(a.samples, pole), stereographic_points(b.samples, pole)


def _vertex_distance(p: np.ndarray, q: np.ndarray) -> float:
    return float(cKDTree(q).query(p)[0].min())


def _segment_distances(p0, p1, q0, q1) -> np.ndarray:
    """Distances between segment pairs (broadcast), by clamped closest points."""
    d1, d2, r = p1 - p0, q1 - q0, p0 - q0
    a = np.sum(d1 * d1, axis=-1)
    e = np.sum(d2 * d2, axis=-1)
    b = np.sum(d1 * d2, axis=-1)
    c = np.sum(d1 * r, axis=-1)
    f = np.sum(d2 * r, axis=-1)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-14 * a * e, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        s = np.where(t < 0.0, np.clip(-c / a, 0.0, 1.0), np.where(t > 1.0, np.clip((b - c) / a, 0.0, 1.0), s))
    t = np.clip(t, 0.0, 1.0)
    gap = r + s[..., None] * d1 - t[..., None] * d2
    return np.linalg.norm(gap, axis=-1)


def polygon_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Exact distance between two closed polygons, or 0 if they meet."""
    p1, q1 = np.roll(p, -1, axis=0), np.roll(q, -1, axis=0)
    best = math.inf
    for start in range(0, len(p), 128):
        sl = slice(start, start + 128)
        d = _segment_distances(p[sl, None], p1[sl, None], q[None], q1[None])
        best = min(best, float(d.min()))
    return best


def _check_apart(p: np.ndarray, q: np.ndarray) -> None:
    vertex = _vertex_distance(p, q)
    if vertex <= MIN_LINK_DISTANCE:
        raise ValidationError(f"curves touch (distance below {MIN_LINK_DISTANCE:g})")
    # every point of a segment is within half its length of a vertex
    half = 0.5 * (np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1).max()
                  + np.linalg.norm(np.roll(q, -1, axis=0) - q, axis=1).max())
    if vertex <= half and polygon_distance(p, q) <= POLYGON_TOUCH * vertex:
        raise ValidationError("curves touch (sample polygons intersect)")


def gauss_linking_sum(p: np.ndarray, q: np.ndarray) -> float:
    """Exact Gauss linking integral of two closed polygons (not rounded).

    Each segment pair contributes the signed solid angle of the quadrilateral
    it spans, in closed form.
    """
    p1 = np.roll(p, -1, axis=0)
    q1 = np.roll(q, -1, axis=0)
    partials = []
    for start in range(0, len(p), 128):
        sl = slice(start, start + 128)
        # vectors from the q-segment endpoints to the p-segment endpoints
        a = p[sl, None, :] - q[None, :, :]
        b = p[sl, None, :] - q1[None, :, :]
        c = p1[sl, None, :] - q1[None, :, :]
        d = p1[sl, None, :] - q[None, :, :]
        an, bn, cn, dn = (np.linalg.norm(x, axis=-1) for x in (a, b, c, d))
        dot = lambda x, y: np.einsum("ijk,ijk->ij", x, y)  # noqa: E731
        trip = dot(a, np.cross(b, c))
        den1 = an * bn * cn + dot(a, b) * cn + dot(b, c) * an + dot(c, a) * bn
        den2 = an * dn * cn + dot(a, d) * cn + dot(d, c) * an + dot(c, a) * dn
        partials.append(float(np.sum(np.arctan2(trip, den1) + np.arctan2(trip, den2))))
    return math.fsum(partials) / (2.0 * np.pi)


def _crossing_count(p: np.ndarray, q: np.ndarray, direction: np.ndarray) -> int | None:
    """Signed count of crossings between two polygons seen from ``direction``.

    Returns None if the projection is not generic.
    """
    d = normalize(direction)
    helper = np.eye(3)[int(np.argmin(np.abs(d)))]
    u = normalize(np.cross(d, helper))
    v = np.cross(d, u)
    basis = np.stack([u, v], axis=1)

    pa, qa = p @ basis, q @ basis
    ph, qh = p @ d, q @ d
    r = np.roll(pa, -1, axis=0) - pa
    s = np.roll(qa, -1, axis=0) - qa
    rh = np.roll(ph, -1) - ph
    sh = np.roll(qh, -1) - qh

    total = 0
    for start in range(0, len(p), 256):
        sl = slice(start, start + 256)
        rr = r[sl, None, :]
        ss = s[None, :, :]
        w = qa[None, :, :] - pa[sl, None, :]
        den = rr[..., 0] * ss[..., 1] - rr[..., 1] * ss[..., 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            tp = (w[..., 0] * ss[..., 1] - w[..., 1] * ss[..., 0]) / den
            tq = (w[..., 0] * rr[..., 1] - w[..., 1] * rr[..., 0]) / den
        scale = np.linalg.norm(rr, axis=-1) * np.linalg.norm(ss, axis=-1)
        tiny = np.abs(den) <= 1e-12 * scale
        eps = 1e-9
        near = (tp > -eps) & (tp < 1 + eps) & (tq > -eps) & (tq < 1 + eps)
        if np.any(near & tiny):
            return None
        edge = near & (
            (np.abs(tp) < eps) | (np.abs(tp - 1) < eps) | (np.abs(tq) < eps) | (np.abs(tq - 1) < eps)
        )
        if np.any(edge):
            return None
        hit = (tp >= 0) & (tp < 1) & (tq >= 0) & (tq < 1) & ~tiny
        if not np.any(hit):
            continue
        i, j = np.nonzero(hit)
        hp = ph[sl][i] + tp[i, j] * rh[sl][i]
        hq = qh[j] + tq[i, j] * sh[j]
        gap = hp - hq
        if np.any(np.abs(gap) < 1e-12):
            return None
        cr = r[sl][i, 0] * s[j, 1] - r[sl][i, 1] * s[j, 0]
        # over strand crossed into under strand, right-hand rule
        sign = np.where(gap > 0, np.sign(cr), -np.sign(cr))
        total += int(np.sum(sign))
    return total


def crossing_linking_sum(p: np.ndarray, q: np.ndarray, seed: int = 0) -> int:
    rng = np.random.default_rng(seed)
    for _ in range(MAX_DIRECTION_TRIES):
        count = _crossing_count(p, q, rng.normal(size=3))
        if count is not None:
            if count % 2:
                continue
            return count // 2
    raise ResolutionError(f"no generic projection direction found in {MAX_DIRECTION_TRIES} tries")


def linking_number(
    a: SampledLoop, b: SampledLoop, method: str = "gauss", pole=None, seed: int = 0
) -> int:
    """Linking number of two disjoint loops, by polygon Gauss sum or crossing count.

    S^3 loops are mapped to R^3 by a shared stereographic chart first.
    """
    p, q = _as_r3_pair(a, b, pole)
    _check_apart(p, q)
    if method == "gauss":
        total = gauss_linking_sum(p, q)
        k = round(total)
        if abs(total - k) >= GAUSS_GUARD:
            raise ResolutionError(f"Gauss sum {total:.4f} too far from an integer")
        return int(k)
    if method == "crossings":
        return crossing_linking_sum(p, q, seed=seed)
    raise ValidationError(f"unknown linking method {method!r}")


# --- pushoffs and tb -----------------------------------------------------------


def pushoff(loop: SampledLoop, vectors: np.ndarray, eps: float) -> SampledLoop:
    """Push each sample by ``eps`` along the given vectors (geodesically on S^3)."""
    if loop.space is Space.R3:
        return SampledLoop.trusted(Space.R3, loop.samples + eps * vectors)
    v = normalize(vectors)
    pts = np.cos(eps) * loop.samples + np.sin(eps) * v
    return SampledLoop.trusted(Space.S3, normalize(pts))


def default_eps(loop: SampledLoop) -> float:
    return loop.min_nonadjacent_distance() / 10.0


def _stable_linking(loop: SampledLoop, field: np.ndarray, eps: float | None, method: str, seed: int) -> int:
    eps = default_eps(loop) if eps is None else eps
    pole = choose_pole(loop) if loop.space is Space.S3 else None
    values = [
        linking_number(loop, pushoff(loop, field, e), method=method, pole=pole, seed=seed)
        for e in (eps, eps / 2.0)
    ]
    if values[0] != values[1]:
        raise ResolutionError(
            f"pushoff linking changes under eps -> eps/2 ({values[0]} vs {values[1]}); increase resolution"
        )
    return values[0]


def reeb_pushoff_linking(
    loop: SampledLoop, eps: float | None = None, method: str = "gauss", seed: int = 0
) -> int:
    """Linking number of a loop with its Reeb pushoff; defined for any embedded loop."""
    return _stable_linking(loop, reeb(loop.space, loop.samples), eps, method, seed)


def tb(
    loop: SampledLoop,
    eps: float | None = None,
    method: str = "gauss",
    seed: int = 0,
    tol: float = LEGENDRIAN_TOL,
) -> int:
    """Thurston-Bennequin number as the linking with the Reeb pushoff."""
    require_legendrian(loop, tol)
    return reeb_pushoff_linking(loop, eps=eps, method=method, seed=seed)


# --- framings --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NormalFraming:
    """Unit normal vector per sample of a loop (tangent to S^3 for S^3 loops)."""

    vectors: np.ndarray

    def check(self, loop: SampledLoop, tol: float = 1e-6) -> None:
        v = np.asarray(self.vectors, dtype=float)
        if v.shape != loop.samples.shape:
            raise ValidationError(f"framing shape {v.shape} != curve shape {loop.samples.shape}")
        if np.max(np.abs(np.linalg.norm(v, axis=1) - 1.0)) > tol:
            raise ValidationError("framing vectors are not unit")
        tang = normalize(fine_derivative(loop.samples, loop.space))
        normal_gap = np.abs(np.sum(v * tang, axis=1))
        if normal_gap.max() > tol:
            raise ValidationError(f"framing not normal at sample {int(np.argmax(normal_gap))}")
        if loop.space is Space.S3:
            radial = np.abs(np.sum(v * loop.samples, axis=1))
            if radial.max() > tol:
                raise ValidationError(f"framing not tangent to S^3 at sample {int(np.argmax(radial))}")
        jumps = np.linalg.norm(v - np.roll(v, -1, axis=0), axis=1)
        if jumps.max() >= 0.5:
            raise ValidationError(f"framing jumps at sample {int(np.argmax(jumps))}")


def _normal_basis(loop: SampledLoop) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Unit tangent plus an oriented orthonormal basis of each normal plane."""
    pts = loop.samples
    tang = normalize(fine_derivative(pts, loop.space))
    n = len(pts)
    first = np.empty_like(pts)
    # transport a normal vector by successive projection
    # start from the coordinate axis that survives projection best
    axes = np.eye(loop.space.dim)
    proj = axes - np.outer(axes @ tang[0], tang[0])
    if loop.space is Space.S3:
        proj = proj - np.outer(proj @ pts[0], pts[0])
    guess = axes[int(np.argmax(np.linalg.norm(proj, axis=1)))]
    for k in range(n):
        w = guess - np.dot(guess, tang[k]) * tang[k]
        if loop.space is Space.S3:
            w = w - np.dot(w, pts[k]) * pts[k]
        first[k] = w / np.linalg.norm(w)
        guess = first[k]
    second = _complete(loop.space, pts, tang, first)
    return tang, first, second


def _complete(space: Space, pts, tang, first) -> np.ndarray:
    """Second normal leg so that (tangent, first, second) is positively oriented."""
    if space is Space.R3:
        return np.cross(tang, first)
    # (p, tangent, first, second) positive in R^4
    out = np.empty_like(first)
    for k in range(len(pts)):
        m = np.stack([pts[k], tang[k], first[k]])
        _, _, vt = np.linalg.svd(m)
        cand = vt[-1]
        if np.linalg.det(np.stack([pts[k], tang[k], first[k], cand])) < 0:
            cand = -cand
        out[k] = cand
    return out


def _rotate_about_tangent(loop: SampledLoop, vectors: np.ndarray) -> np.ndarray:
    """The normal vector a quarter turn ahead of each framing vector."""
    tang = normalize(fine_derivative(loop.samples, loop.space))
    return _complete(loop.space, loop.samples, tang, normalize(vectors))


def relative_turns(loop: SampledLoop, a: np.ndarray, b: np.ndarray) -> int:
    """Full turns of framing ``b`` relative to framing ``a`` around the tangent."""
    qa = _rotate_about_tangent(loop, a)
    rel = np.stack([np.sum(b * a, 1), np.sum(b * qa, 1)], axis=1)
    return winding_number(rel)


def _twist_profile(loop: SampledLoop, turns: int) -> np.ndarray:
    """Twist angle per sample, concentrated where the tangent turns slowest.

    Near front cusps the tangent can swing through a large angle between two
    samples; a framing stays continuous there only if the twist is parked.
    """
    n = loop.n
    tang = normalize(fine_derivative(loop.samples, loop.space))
    swing = np.linalg.norm(np.roll(tang, -1, axis=0) - tang, axis=1)
    sigma = max(n / 16.0, 10.0 * abs(turns))
    # worst swing within two widths of each candidate center
    reach = int(2 * sigma) + 1
    worst = maximum_filter1d(swing, size=min(2 * reach + 1, n), mode="wrap")
    center = int(np.argmin(worst))
    k = np.arange(n)
    d = (k - center + n // 2) % n - n // 2
    w = np.exp(-0.5 * (d / sigma) ** 2)
    # increments start at sample 0 so the angle closes up exactly at sample N
    cum = np.concatenate([[0.0], np.cumsum(w)[:-1]]) / w.sum()
    return 2.0 * np.pi * turns * cum


def twist_framing(loop: SampledLoop, framing: np.ndarray, turns: int) -> np.ndarray:
    """Rotate a framing positively about the tangent by ``turns`` full turns in total."""
    v = normalize(np.asarray(framing, dtype=float))
    if turns == 0:
        return v
    ang = _twist_profile(loop, turns)[:, None]
    return normalize(np.cos(ang) * v + np.sin(ang) * _rotate_about_tangent(loop, v))


def framing_linking(
    loop: SampledLoop, vectors: np.ndarray, eps: float | None = None, method: str = "gauss"
) -> int:
    """Linking of a loop with its pushoff along a normal framing."""
    return _stable_linking(loop, vectors, eps, method, 0)


def _closed_transport_framing(loop: SampledLoop) -> np.ndarray:
    tang, e1, e2 = _normal_basis(loop)
    # carry the last vector one more step and measure the holonomy at sample 0
    w = e1[-1] - np.dot(e1[-1], tang[0]) * tang[0]
    if loop.space is Space.S3:
        w = w - np.dot(w, loop.samples[0]) * loop.samples[0]
    hol = math.atan2(np.dot(w, e2[0]), np.dot(w, e1[0]))
    ang = -hol * np.arange(loop.n) / loop.n
    return normalize(np.cos(ang)[:, None] * e1 + np.sin(ang)[:, None] * e2)


def contact_framing(loop: SampledLoop) -> np.ndarray | None:
    """Unit normal of xi along the loop, or None if the loop is not Legendrian.

    On R^3 this is ``(-y, 0, 1)`` normalized, on S^3 it is ``i p``; both sit on the
    Reeb side of xi, so the pushoff links the loop tb times.
    """
    if not is_legendrian(loop):
        return None
    if loop.space is Space.S3:
        return reeb(Space.S3, loop.samples)
    y = loop.samples[:, 1]
    return normalize(np.column_stack([-y, np.zeros_like(y), np.ones_like(y)]))


def seifert_framing(loop: SampledLoop, start: NormalFraming | None = None) -> NormalFraming:
    """Zero-linking normal framing, obtained by untwisting a continuous start framing.

    Without a start framing, Legendrians start from the contact framing and
    other loops from a transported one.
    """
    if start is None:
        vec = contact_framing(loop)
        if vec is None:
            vec = _closed_transport_framing(loop)
    else:
        start.check(loop)
        vec = np.asarray(start.vectors, dtype=float)
    k = framing_linking(loop, vec)
    if k:
        vec = twist_framing(loop, vec, -k)
    residual = framing_linking(loop, vec)
    if residual != 0:
        raise ResolutionError(f"untwisted framing still links {residual} times")
    return NormalFraming(vec)


def bennequin_check(tb_value: int, rot_value: int, chi: int) -> tuple[bool, int]:
    """Slack in ``tb + |rot| <= -chi``; the inequality holds iff slack >= 0."""
    if chi > 1:
        raise ValidationError(f"Euler characteristic of a Seifert surface is at most 1, got {chi}")
    slack = -chi - tb_value - abs(rot_value)
    return slack >= 0, slack
