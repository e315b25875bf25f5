"""The standard contact structures on R^3 and S^3.

R^3 carries ``alpha = dz - y dx``.  S^3, viewed in C^2 through
``(z1, z2) <-> z1 + z2 j``, carries ``alpha = sum(x_k dy_k - y_k dx_k)``, which at
``p`` is ``v -> <i p, v>``; it is normalized so that ``alpha_p(i p) = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    QI,
    QJ,
    QK,
    SampledLoop,
    Space,
    ValidationError,
    fine_derivative,
    qmul,
)

LEGENDRIAN_TOL = 1e-6
DEFAULT_S_STEPS = 32


def alpha(space: Space, points, vectors) -> np.ndarray:
    """Contact form evaluated pointwise, broadcasting over leading axes."""
    p = np.asarray(points, dtype=float)
    v = np.asarray(vectors, dtype=float)
    if space is Space.R3:
        return v[..., 2] - p[..., 1] * v[..., 0]
    return np.sum(qmul(QI, p) * v, axis=-1)


def xi_frame(space: Space, p) -> tuple[np.ndarray, np.ndarray]:
    """The global frame of xi: ``(d/dx + y d/dz, d/dy)`` on R^3, ``(j p, k p)`` on S^3."""
    space = Space.parse(space)
    p = np.asarray(p, dtype=float)
    if space is Space.R3:
        e1 = np.zeros_like(p)
        e1[..., 0] = 1.0
        e1[..., 2] = p[..., 1]
        e2 = np.zeros_like(p)
        e2[..., 1] = 1.0
        return e1, e2
    return qmul(QJ, p), qmul(QK, p)


def reeb(space: Space, p) -> np.ndarray:
    """Reeb field: ``d/dz`` on R^3, ``i p`` on S^3."""
    space = Space.parse(space)
    p = np.asarray(p, dtype=float)
    if space is Space.R3:
        r = np.zeros_like(p)
        r[..., 2] = 1.0
        return r
    return qmul(QI, p)


def d_alpha(space: Space, points, u, v) -> np.ndarray:
    """Exterior derivative of the contact form on a pair of vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if space is Space.R3:
        # d(dz - y dx) = dx ^ dy
        return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]
    # alpha = w dx - x dw + y dz - z dy, d alpha = 2 (dw^dx + dy^dz)
    return 2.0 * (
        u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0] + u[..., 2] * v[..., 3] - u[..., 3] * v[..., 2]
    )


def frame_coordinates(space: Space, points, vectors) -> np.ndarray:
    """Coordinates ``(a, b)`` of the xi-component of ``vectors`` in ``xi_frame``.

    Least squares against ``(e1, e2, R)``; the Reeb component is discarded.
    """
    e1, e2 = xi_frame(space, points)
    r = reeb(space, points)
    basis = np.stack([e1, e2, r], axis=-1)
    if space is Space.S3:
        # the three legs are orthonormal in R^4
        coords = np.einsum("...ij,...i->...j", basis, np.asarray(vectors, dtype=float))
    else:
        coords = np.linalg.solve(basis, np.asarray(vectors, dtype=float)[..., None])[..., 0]
    return coords[..., :2]


def contact_residual(loop: SampledLoop) -> tuple[float, np.ndarray]:
    """Normalized contact defect ``|alpha(v)| / |v|`` along the loop.

    Derivatives are taken on a refined trigonometric grid (at least 8192 points)
    so the truncation error stays far below ``LEGENDRIAN_TOL``.
    """
    v = fine_derivative(loop.samples, loop.space)
    res = np.abs(alpha(loop.space, loop.samples, v)) / np.linalg.norm(v, axis=1)
    return float(res.max()), res


def is_legendrian(loop: SampledLoop, tol: float = LEGENDRIAN_TOL) -> bool:
    return contact_residual(loop)[0] < tol


def require_legendrian(loop: SampledLoop, tol: float = LEGENDRIAN_TOL) -> None:
    worst, res = contact_residual(loop)
    if not worst < tol:
        raise ValidationError(
            f"curve is not Legendrian: contact residual {worst:.3g} at sample {int(np.argmax(res))}"
        )


# --- formal Legendrian embeddings -------------------------------------------


def _tangent(loop: SampledLoop) -> np.ndarray:
    # same derivative the contact residual is judged by
    return fine_derivative(loop.samples, loop.space)


@dataclass(frozen=True, eq=False)
class FormalLegendrian:
    """An embedding with a homotopy ``F[s, n]`` from its derivative into xi.

    ``F`` has shape ``(S + 1, N, d)`` and is indexed ``[s][t]``.
    """

    loop: SampledLoop
    F: np.ndarray

    def __post_init__(self):
        F = np.array(self.F, dtype=float)
        d = self.loop.space.dim
        if F.ndim != 3 or F.shape[1] != self.loop.n or F.shape[2] != d or F.shape[0] < 2:
            raise ValidationError(
                f"homotopy must have shape (S+1, {self.loop.n}, {d}), got {F.shape}"
            )
        object.__setattr__(self, "F", F)

    @classmethod
    def constant(cls, loop: SampledLoop, steps: int = DEFAULT_S_STEPS) -> "FormalLegendrian":
        v = _tangent(loop)
        return cls(loop, np.repeat(v[None], steps + 1, axis=0))

    @classmethod
    def straight_line(
        cls, loop: SampledLoop, target: np.ndarray, steps: int = DEFAULT_S_STEPS
    ) -> "FormalLegendrian":
        """Linear homotopy from the derivative to ``target``; may pass through zero."""
        v = _tangent(loop)
        s = np.linspace(0.0, 1.0, steps + 1)[:, None, None]
        return cls(loop, (1.0 - s) * v[None] + s * np.asarray(target, dtype=float)[None])


@dataclass
class FormalReport:
    ok: bool
    worst_violation: tuple[str, float]
    failures: dict = field(default_factory=dict)


def validate_formal(fl: FormalLegendrian, tol: float = LEGENDRIAN_TOL) -> FormalReport:
    """Check the three defining conditions of a formal Legendrian embedding."""
    loop, F = fl.loop, fl.F
    v = _tangent(loop)
    scale = float(np.linalg.norm(v, axis=1).max())
    start_gap = np.linalg.norm(F[0] - v, axis=1) / scale
    end_norm = np.linalg.norm(F[-1], axis=1)
    end_res = np.abs(alpha(loop.space, loop.samples, F[-1])) / np.maximum(end_norm, 1e-300)
    norms = np.linalg.norm(F, axis=2)

    checks = {
        "start": (float(start_gap.max()), int(np.argmax(start_gap)), tol),
        "end_in_xi": (float(end_res.max()), int(np.argmax(end_res)), tol),
    }
    failures = {}
    for name, (value, idx, limit) in checks.items():
        if not value < limit:
            failures[name] = {"value": value, "t_index": idx}
    smallest = float(norms.min())
    if not smallest > 1e-9:
        s_idx, t_idx = np.unravel_index(np.argmin(norms), norms.shape)
        failures["nonvanishing"] = {"value": smallest, "s_index": int(s_idx), "t_index": int(t_idx)}

    if failures:
        name = next(iter(failures))
        worst = (name, failures[name]["value"])
    else:
        worst = max(
            [("start", checks["start"][0]), ("end_in_xi", checks["end_in_xi"][0])],
            key=lambda kv: kv[1],
        )
    return FormalReport(ok=not failures, worst_violation=worst, failures=failures)


def formal_invariants(fl: FormalLegendrian) -> tuple[int, int]:
    """``(formal_tb, formal_rot)`` of a valid formal Legendrian embedding."""
    from .invariants import reeb_pushoff_linking, winding_number

    report = validate_formal(fl)
    if not report.ok:
        raise ValidationError(f"invalid formal Legendrian: {report.failures}")
    coords = frame_coordinates(fl.loop.space, fl.loop.samples, fl.F[-1])
    formal_rot = winding_number(coords)
    formal_tb = reeb_pushoff_linking(fl.loop)
    return formal_tb, formal_rot
