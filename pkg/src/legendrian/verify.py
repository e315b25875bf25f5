"""Acceptance checks: catalog invariants, loop identities, the great-circle sphere."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.transform import Rotation

from . import catalog
from .contact import contact_residual, reeb
from .geometry import SampledLoop, Space, choose_pole, parameter_grid, stereographic_points
from .invariants import (
    bennequin_check,
    default_eps,
    linking_number,
    pushoff,
    rot,
    seifert_framing,
    tb,
)
from .loops import rot_pi1, reparametrize, reparametrize_framing, tb_pi1, transport_framing
from .projections import PlanarCurve, lift_front, lift_lagrangian, signed_area
from .unitary import (
    Unitary2,
    a_theta_loop,
    act,
    d_sphere_equator,
    equator_point,
    orbit_maps,
    spin_lift_closes,
    tau_framings,
)

M_RANGE = range(-3, 4)
K_RANGE = range(-2, 3)


@dataclass
class Check:
    name: str
    expected: object
    computed: object
    passed: bool
    runtime: float = 0.0

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name} ({self.runtime:.1f}s): expected {self.expected}; computed {self.computed}"


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "expected": repr(c.expected),
                    "computed": repr(c.computed),
                    "pass": c.passed,
                    "runtime": round(c.runtime, 3),
                }
                for c in self.checks
            ],
        }


def _greatcircle() -> SampledLoop:
    return catalog.get("greatcircle-j-s3").loop


def catalog_invariants(seed: int = 0):
    expected, computed = {}, {}
    for e in catalog.entries():
        g = tb(e.loop, method="gauss")
        c = tb(e.loop, method="crossings", seed=seed)
        expected[e.name] = catalog.EXPECTED[e.name]
        computed[e.name] = (g, rot(e.loop)) if g == c else ("engines disagree", g, c)
    return expected, computed, expected == computed


def bennequin(seed: int = 0):
    computed, ok = {}, True
    for e in catalog.entries():
        holds, slack = bennequin_check(tb(e.loop), rot(e.loop), e.chi)
        computed[e.name] = slack
        ok &= holds
        if e.name in ("unknot-r3", "trefoil-r3"):
            ok &= slack == 0
    return "slack >= 0 everywhere, 0 for unknot-r3 and trefoil-r3", computed, ok


def orbit_degrees(seed: int = 0):
    g = _greatcircle()
    computed = {m: rot_pi1(a_theta_loop(m, g)) for m in M_RANGE}
    expected = {m: m for m in M_RANGE}
    return expected, computed, computed == expected


def reparametrization(seed: int = 0, orbits=(-1, 1, 2)):
    g = _greatcircle()
    tb0, rot0 = tb(g), rot(g)
    sf = seifert_framing(g)
    expected, computed = {}, {}
    for m in orbits:
        ll = a_theta_loop(m, g)
        fl = transport_framing(g, sf, orbit_maps(m, ll.m))
        r, t = rot_pi1(ll), tb_pi1(ll, fl)
        for k in K_RANGE:
            llk = reparametrize(ll, k)
            flk = reparametrize_framing(fl, ll, k)
            expected[(m, k)] = (r - k * rot0, t - k * tb0)
            computed[(m, k)] = (rot_pi1(llk), tb_pi1(llk, flk))
    return expected, computed, expected == computed


def transported_framing(seed: int = 0):
    g = _greatcircle()
    sf = seifert_framing(g)
    computed = {}
    for m in M_RANGE:
        ll = a_theta_loop(m, g)
        computed[m] = tb_pi1(ll, transport_framing(g, sf, orbit_maps(m, ll.m)))
    expected = {m: 0 for m in M_RANGE}
    return expected, computed, computed == expected


def quaternionic_sphere(seed: int = 0, num_theta: int = 256):
    d1 = d_sphere_equator(num_theta)
    d2 = d_sphere_equator(2 * num_theta)
    gap = 0.0
    for phi in parameter_grid(16):
        p = equator_point(phi)
        north = tau_framings(p, "north").vectors
        south = tau_framings(p, "south").vectors
        gap = max(gap, float(np.abs(north - south).max()))
    computed = {"d": d1, "d(2M)": d2, "max |tau~ - tau|": gap}
    ok = d1 == 0 and d2 == 0 and gap <= 1e-6
    return {"d": 0, "d(2M)": 0, "max |tau~ - tau|": "<= 1e-6"}, computed, ok


def non_injectivity(seed: int = 0):
    ll = a_theta_loop(2, _greatcircle())
    computed = {"rot_pi1": rot_pi1(ll), "spin lift closes (m=2)": spin_lift_closes(2), "spin lift closes (m=1)": spin_lift_closes(1)}
    expected = {"rot_pi1": 2, "spin lift closes (m=2)": True, "spin lift closes (m=1)": False}
    return expected, computed, computed == expected


def random_planar_curve(rng: np.random.Generator, n: int = 512, modes: int = 4) -> PlanarCurve:
    t = parameter_grid(n)
    out = np.zeros((n, 2))
    for k in range(1, modes + 1):
        a = rng.normal(size=(2, 2)) / k**2
        out += np.cos(k * t)[:, None] * a[0] + np.sin(k * t)[:, None] * a[1]
    return PlanarCurve(out)


def lift_round_trips(seed: int = 0, count: int = 50):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(count):
        pc = random_planar_curve(rng)
        worst = max(worst, abs(lift_lagrangian(pc).closure_defect + signed_area(pc)))
    fronts = {}
    for e in catalog.entries(Space.R3):
        fronts[e.name] = float(f"{contact_residual(lift_front(e.front))[0]:.3g}")
    computed = {"max |defect + area|": float(f"{worst:.3g}"), "front residuals": fronts}
    ok = worst <= 1e-6 and all(v < 1e-6 for v in fronts.values())
    return {"max |defect + area|": "<= 1e-6", "front residuals": "< 1e-6"}, computed, ok


def link_pairs() -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Linked pairs built from the catalog: each curve with a Reeb pushoff, and a Hopf link."""
    pairs = []
    for e in catalog.entries():
        loop = e.loop
        off = pushoff(loop, reeb(loop.space, loop.samples), 2.0 * default_eps(loop))
        a, b = loop.samples, off.samples
        if loop.space is Space.S3:
            pole = choose_pole(loop, off)
            a, b = stereographic_points(a, pole), stereographic_points(b, pole)
        pairs.append((e.name, a, b))
    t = parameter_grid(512)
    circle = np.column_stack([np.cos(t), np.sin(t), 0 * t])
    hopf = np.column_stack([1 + np.cos(t), 0 * t, np.sin(t)])
    pairs.append(("hopf", circle, hopf))
    return pairs


def _min_pair_distance(a: np.ndarray, b: np.ndarray) -> float:
    from scipy.spatial import cKDTree

    return float(cKDTree(b).query(a)[0].min())


def perturb(rng: np.random.Generator, a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Random rigid motion plus smooth independent wiggles well below the pair gap."""
    rotm = Rotation.random(random_state=rng).as_matrix()
    shift = rng.normal(size=3)
    amp = 0.2 * _min_pair_distance(a, b)
    t = parameter_grid(len(a))[:, None]

    def wiggle(x):
        w = sum(np.cos(k * t + rng.uniform(0, 2 * np.pi)) * rng.normal(size=3) for k in (1, 2, 3))
        w = w / np.abs(w).max()
        return x + amp * w

    return wiggle(a) @ rotm.T + shift, wiggle(b) @ rotm.T + shift


def oracle_equivalence(seed: int = 0, count: int = 50):
    rng = np.random.default_rng(seed)
    pairs = link_pairs()
    mismatches = []
    for i in range(count):
        name, a, b = pairs[i % len(pairs)]
        pa, pb = perturb(rng, a, b)
        la, lb = SampledLoop(Space.R3, pa), SampledLoop(Space.R3, pb)
        g = linking_number(la, lb, method="gauss")
        c = linking_number(la, lb, method="crossings", seed=seed + i)
        if g != c:
            mismatches.append((i, name, g, c))
    return f"{count} agreements", {"mismatches": mismatches}, not mismatches


def unitary_invariance(seed: int = 0, count: int = 20):
    rng = np.random.default_rng(seed)
    bad = []
    for e in catalog.entries(Space.S3):
        ref = (tb(e.loop), rot(e.loop))
        for i in range(count):
            moved = act(Unitary2.random(rng), e.loop)
            got = (tb(moved), rot(moved))
            if got != ref:
                bad.append((e.name, i, got))
    return "tb, rot unchanged", {"changes": bad}, not bad


CRITERIA = [
    ("1 catalog invariants", catalog_invariants),
    ("2 bennequin inequality", bennequin),
    ("3 orbit loop degrees", orbit_degrees),
    ("4 reparametrization identities", reparametrization),
    ("5 transported framing", transported_framing),
    ("6 quaternionic sphere", quaternionic_sphere),
    ("7 non-injectivity witness", non_injectivity),
    ("8 lift round-trips", lift_round_trips),
    ("9 oracle equivalence", oracle_equivalence),
    ("10 unitary invariance", unitary_invariance),
]


def run_check(name: str, fn, seed: int = 0) -> Check:
    start = time.perf_counter()
    try:
        expected, computed, ok = fn(seed=seed)
    except Exception as exc:  # a crash is a failed check, reported with its message
        expected, computed, ok = "no error", f"{type(exc).__name__}: {exc}", False
    return Check(name, expected, computed, bool(ok), time.perf_counter() - start)


def run_suite(seed: int = 0, only=None) -> VerificationReport:
    report = VerificationReport()
    for name, fn in CRITERIA:
        if only and name.split()[0] not in only:
            continue
        report.checks.append(run_check(name, fn, seed))
    report.checks.sort(key=lambda c: int(c.name.split()[0]))
    return report
