"""Command line front end.

Data-producing subcommands (lift-front, lift-lagrangian, orbit) write JSON to
stdout and a one-line summary to stderr, so they pipe into the report commands.
Exit codes: 0 success, 1 validation or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import catalog, io
from .contact import LEGENDRIAN_TOL, contact_residual
from .geometry import ValidationError, resample
from .invariants import bennequin_check, rot, seifert_framing, tb
from .loops import DEFAULT_M, reparametrize, reparametrize_framing, rot_pi1, tb_pi1, transport_framing
from .projections import lift_front, lift_lagrangian, project, stabilize
from .render import render
from .unitary import a_theta_loop, base_at_one, d_sphere_equator, orbit_maps
from .verify import run_suite


class UsageError(ValidationError):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load(name: str | None):
    """Catalog name, else a JSON file (``-`` or nothing: stdin)."""
    if name in catalog.NAMES:
        return catalog.get(name)
    text, source = io.read_text(name)
    return io.parse_json(text, source), source


def _curve(name: str | None, args):
    item = _load(name)
    if isinstance(item, catalog.CatalogEntry):
        return item.loop, item.chi
    obj, source = item
    if isinstance(obj, dict) and "space" not in obj and args.space:
        obj = dict(obj, space=args.space)
    return io.curve_from_json(obj, source), None


def _front(name: str | None):
    item = _load(name)
    if isinstance(item, catalog.CatalogEntry):
        if item.front is None:
            raise ValidationError(f"catalog entry {item.name} has no front")
        return item.front
    obj, source = item
    if isinstance(obj, dict) and "space" in obj:
        return project(io.curve_from_json(obj, source), "front")
    return io.front_from_json(obj, source)


def _pole(text: str | None):
    if text is None:
        return None
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValidationError(f"--pole must be four comma-separated numbers, got {text!r}") from None
    if len(vals) != 4:
        raise ValidationError("--pole needs four components w,x,y,z")
    pole = np.array(vals)
    return pole / np.linalg.norm(pole)


def _emit(args, summary: str, report: dict) -> None:
    print(json.dumps(report, sort_keys=True) if args.json else summary)


def _emit_data(obj: dict, summary: str, out: str | None) -> None:
    text = io.dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    print(summary, file=sys.stderr)


def cmd_invariants(args) -> int:
    loop, chi = _curve(args.input, args)
    if args.N:
        loop = resample(loop, args.N)
    t = tb(loop, eps=args.eps, method=args.method, seed=args.seed, tol=args.tol)
    r = rot(loop, tol=args.tol)
    chi = args.chi if args.chi is not None else chi
    report = {"tb": t, "rot": r, "contact_residual": contact_residual(loop)[0]}
    summary = f"tb={t} rot={r}"
    if chi is not None:
        holds, slack = bennequin_check(t, r, chi)
        report.update(chi=chi, bennequin_holds=holds, slack=slack)
        summary += f" bennequin: slack={slack}" + ("" if holds else " (violated)")
    _emit(args, summary, report)
    return 0


def cmd_lift_front(args) -> int:
    fc = _front(args.input)
    if args.stabilize:
        fc = stabilize(fc, args.stabilize)
    loop = lift_front(fc)
    res = contact_residual(loop)[0]
    _emit_data(io.curve_to_json(loop), f"lifted {loop.n} samples, cusps={list(fc.cusps)}, residual={res:.3g}", args.out)
    return 0


def cmd_lift_lagrangian(args) -> int:
    item = _load(args.input)
    if isinstance(item, catalog.CatalogEntry):
        pc = project(item.loop, "lagrangian")
        z0 = item.loop.samples[0, 2]
    else:
        obj, source = item
        if isinstance(obj, dict) and "space" in obj:
            loop = io.curve_from_json(obj, source)
            pc, z0 = project(loop, "lagrangian"), loop.samples[0, 2]
        else:
            pc, z0 = io.planar_from_json(obj, source), 0.0
    z0 = args.z0 if args.z0 is not None else z0
    lift = lift_lagrangian(pc, z0)
    if lift.loop is None:
        raise ValidationError(f"Lagrangian lift does not close: closure_defect={lift.closure_defect:.6g}")
    _emit_data(io.curve_to_json(lift.loop), f"closure_defect={lift.closure_defect:.3g}", args.out)
    return 0


def cmd_orbit(args) -> int:
    base, _ = _curve(args.base, args)
    if args.N:
        base = resample(base, args.N)
    ll = a_theta_loop(args.m, base, args.M)
    if args.framing_out:
        moved, _ = base_at_one(base)
        fl = transport_framing(moved, seifert_framing(moved), orbit_maps(args.m, args.M))
        Path(args.framing_out).write_text(io.dumps(io.framing_loop_to_json(fl, ll.space)) + "\n")
    _emit_data(io.loop_to_json(ll), f"orbit loop m={args.m} with {ll.m} slots of {ll.n} samples", args.out)
    return 0


def cmd_loop(args) -> int:
    text, source = io.read_text(args.input)
    ll = io.loop_from_json(io.parse_json(text, source), source)
    fl = None
    if args.framing:
        ftext, fsource = io.read_text(args.framing)
        fl = io.framing_loop_from_json(io.parse_json(ftext, fsource), fsource)
    if args.k:
        if fl is not None:
            fl = reparametrize_framing(fl, ll, args.k)
        ll = reparametrize(ll, args.k)
    want_rot = args.rot_pi1 or not args.tb_pi1
    report, parts = {}, []
    if want_rot:
        report["rot_pi1"] = rot_pi1(ll)
        parts.append(f"rot_pi1={report['rot_pi1']}")
    if args.tb_pi1:
        if fl is None:
            raise ValidationError("--tb-pi1 needs --framing with a framing loop")
        report["tb_pi1"] = tb_pi1(ll, fl)
        parts.append(f"tb_pi1={report['tb_pi1']}")
    _emit(args, " ".join(parts), report)
    return 0


def cmd_sphere_d(args) -> int:
    d = d_sphere_equator(args.M, north=args.north)
    _emit(args, f"d={d}", {"d": d, "num_theta": args.M, "north": args.north})
    return 0


def cmd_verify(args) -> int:
    if args.suite != "paper":
        raise ValidationError(f"unknown suite {args.suite!r}")
    only = set(args.only.split(",")) if args.only else None
    report = run_suite(seed=args.seed, only=only)
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True))
    else:
        for c in report.checks:
            print(c.line())
        print("overall: " + ("PASS" if report.passed else "FAIL"))
    return 0 if report.passed else 2


def cmd_render(args) -> int:
    item = _load(args.input)
    if isinstance(item, catalog.CatalogEntry):
        obj = item.front if (args.mode == "front" and item.front is not None) else item.loop
        title = item.name
    else:
        raw, source = item
        title = Path(source).stem
        if isinstance(raw, dict) and "space" in raw:
            obj = io.curve_from_json(raw, source)
        else:
            obj = io.front_from_json(raw, source)
    svg = render(obj, args.mode, pole=_pole(args.pole), title=title)
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    cusps = svg.count('class="cusp"')
    print(f"rendered {args.mode} projection with {cusps} cusp glyphs", file=sys.stderr)
    return 0


def build_parser() -> Parser:
    common = Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="full JSON report instead of a summary line")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=LEGENDRIAN_TOL)
    common.add_argument("--space", choices=["r3", "s3"])
    common.add_argument("--out")

    p = Parser(prog="legendrian", description="Invariants of Legendrian knots and loops in R^3 and S^3.")
    sub = p.add_subparsers(dest="command", parser_class=Parser)
    sub.required = True

    s = sub.add_parser("invariants", parents=[common], help="tb, rot and the Bennequin slack of a curve")
    s.add_argument("--input")
    s.add_argument("--eps", type=float)
    s.add_argument("--method", choices=["gauss", "crossings"], default="gauss")
    s.add_argument("--chi", type=int)
    s.add_argument("--N", type=int)
    s.set_defaults(fn=cmd_invariants)

    s = sub.add_parser("lift-front", parents=[common], help="Legendrian lift of a front")
    s.add_argument("--input")
    s.add_argument("--stabilize", type=int, choices=[-1, 1])
    s.set_defaults(fn=cmd_lift_front)

    s = sub.add_parser("lift-lagrangian", parents=[common], help="Legendrian lift of a Lagrangian projection")
    s.add_argument("--input")
    s.add_argument("--z0", type=float)
    s.set_defaults(fn=cmd_lift_lagrangian)

    s = sub.add_parser("orbit", parents=[common], help="the loop A_theta^m applied to an S^3 Legendrian")
    s.add_argument("--base", default="greatcircle-j-s3")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--M", type=int, default=DEFAULT_M)
    s.add_argument("--N", type=int)
    s.add_argument("--framing-out", help="also write the transported Seifert framing loop here")
    s.set_defaults(fn=cmd_orbit)

    s = sub.add_parser("loop", parents=[common], help="Rot_pi1 and tb_pi1 of a loop of Legendrians")
    s.add_argument("--input")
    s.add_argument("--rot-pi1", action="store_true")
    s.add_argument("--tb-pi1", action="store_true")
    s.add_argument("--framing", help="framing loop JSON, needed for --tb-pi1")
    s.add_argument("--k", type=int, default=0, help="reparametrize by gamma(t - k theta) first")
    s.set_defaults(fn=cmd_loop)

    s = sub.add_parser("sphere-d", parents=[common], help="degree difference d on the great-circle sphere")
    s.add_argument("--M", type=int, default=DEFAULT_M)
    s.add_argument("--north", choices=["north", "north-transported"], default="north")
    s.set_defaults(fn=cmd_sphere_d)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    s.add_argument("--suite", default="paper")
    s.add_argument("--only", help="comma-separated criterion numbers")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("render", parents=[common], help="SVG drawing of a projection")
    s.add_argument("--input")
    s.add_argument("--mode", choices=["front", "lagrangian"], default="front")
    s.add_argument("--pole", help="w,x,y,z pole for S^3 curves")
    s.set_defaults(fn=cmd_render)
    return p


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
