"""Command-line front door.

Builders print a bundle JSON on stdout; ``verify`` and ``solve`` consume one
(from a file or stdin), so the subcommands compose through pipes. Exit codes:
0 all claims pass, 1 a claim failed, 2 invalid input or a violated
precondition (reported as machine-readable JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import counterexamples as build
from . import continuous as cont
from . import geometry, lattice, scalars, verification
from .bundle import Bundle, signal_from_json, stencil_from_json
from .errors import PreconditionError
from .geometry import ConvexBody


def _read_arg_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if os.path.exists(arg):
        with open(arg, "r", encoding="utf-8") as fh:
            return fh.read()
    return arg


def _load_json_arg(arg: str) -> dict:
    return json.loads(_read_arg_text(arg))


def _parse_vector(text: str):
    return tuple(scalars.parse_real(part) for part in text.split(","))


def _parse_body(text: str) -> ConvexBody:
    text = text.strip()
    if ":" in text and not text.startswith("{"):
        lo, hi = text.split(":")
        return ConvexBody.interval(float(scalars.parse_real(lo)),
                                   float(scalars.parse_real(hi)))
    return ConvexBody.from_json(_load_json_arg(text))


def _emit_bundle(bundle: Bundle, out: str | None) -> int:
    text = bundle.dumps()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _diag(kind: str, message: str, condition: str | None = None) -> None:
    payload = {"error": kind, "message": message}
    if condition:
        payload["condition"] = condition
    print(json.dumps(payload), file=sys.stderr)


def _seed_from_env(seed: int) -> int:
    env = os.environ.get("FORGE_SEED")
    return int(env) if env else seed


def _cmd_example1(args) -> int:
    mode = "continuous" if args.continuous else "discrete"
    bundle = build.two_tap_pair(
        scalars.parse_scalar(args.a1), scalars.parse_scalar(args.a2),
        scalars.parse_scalar(args.b1), scalars.parse_scalar(args.b2),
        _parse_vector(args.y), _parse_vector(args.z),
        r=scalars.parse_real(args.r), mode=mode,
    )
    return _emit_bundle(bundle, args.out)


def _cmd_example2(args) -> int:
    mode = "continuous" if args.continuous else "discrete"
    source = signal_from_json(_load_json_arg(args.psi)) if args.psi else None
    rho = scalars.parse_real(args.rho) if args.rho else None
    center = _parse_vector(args.center) if args.center else None
    bundle = build.three_tap_background(
        scalars.parse_scalar(args.a1), scalars.parse_scalar(args.a2),
        scalars.parse_scalar(args.phase), _parse_vector(args.y),
        source=source, rho=rho, center=center, mode=mode, grid=args.grid,
    )
    return _emit_bundle(bundle, args.out)


def _load_stencil_and_source(args):
    stencil_obj = _load_json_arg(args.stencil)
    source = signal_from_json(_load_json_arg(args.psi))
    mode = "discrete" if isinstance(source, lattice.LatticeSignal) else "continuous"
    stencil = stencil_from_json(stencil_obj, mode)
    return stencil, source


def _cmd_thm1(args) -> int:
    stencil, source = _load_stencil_and_source(args)
    return _emit_bundle(build.difference_pair(stencil, source, grid=args.grid), args.out)


def _cmd_thm2(args) -> int:
    stencil, source = _load_stencil_and_source(args)
    return _emit_bundle(build.pauli_pair(stencil, source, grid=args.grid), args.out)


def _cmd_thm3(args) -> int:
    source = signal_from_json(_load_json_arg(args.psi))
    perturbation = signal_from_json(_load_json_arg(args.phi))
    bundle = build.reflection_background(
        source, perturbation, _parse_body(args.u0), _parse_body(args.u1)
    )
    return _emit_bundle(bundle, args.out)


def _cmd_thm4(args) -> int:
    stencil, source = _load_stencil_and_source(args)
    body = _parse_body(args.body)
    phase = scalars.parse_scalar(args.phase) if args.phase else None
    bundle = build.masked_background(
        stencil, source, body, _parse_vector(args.ystar), phase=phase, grid=args.grid
    )
    return _emit_bundle(bundle, args.out)


def _cmd_verify(args) -> int:
    bundle = Bundle.from_json(_load_json_arg(args.bundle))
    report = verification.run_claims(bundle)
    text = report.dumps()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report.passed else 1


def _cmd_campaign(args) -> int:
    dims = tuple(int(d) for d in args.dims.split(","))
    summary = verification.property_campaign(
        count=args.count, control_count=args.controls, dims=dims,
        seed=_seed_from_env(args.seed),
    )
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(summary.to_csv())
    print(summary.dumps())
    return 0 if summary.valid_failures == 0 else 1


def _cmd_solve(args) -> int:
    bundle = Bundle.from_json(_load_json_arg(args.bundle))
    if bundle.mode != "discrete":
        _diag("invalid-input", "the projection demo runs on discrete bundles")
        return 2
    f = bundle.signals.get("f") or bundle.signals.get("f_total")
    g = bundle.signals.get("g") or bundle.signals.get("g_total")
    if f is None or g is None:
        _diag("invalid-input", "bundle carries no signal pair")
        return 2
    runs = verification.solver_demo(
        f, g, restarts=args.restarts, iterations=args.iterations,
        seed=_seed_from_env(args.seed), grid=args.grid,
    )
    print(json.dumps(verification.solver_runs_to_json(
        runs, construction=bundle.construction, restarts=args.restarts,
        iterations=args.iterations, seed=_seed_from_env(args.seed),
    ), indent=2))
    return 0


def _cmd_spectrum(args) -> int:
    sig = signal_from_json(_load_json_arg(args.signal))
    n = args.grid
    if n < 2:
        _diag("invalid-input", "grid must be at least 2")
        return 2
    if isinstance(sig, lattice.LatticeSignal):
        span = 3.141592653589793
        evaluate = lattice.dft_eval
    else:
        evaluate = cont.ft_eval
        if isinstance(sig, cont.DeltaTrain):
            span = 3.141592653589793
        else:
            span = 4.0 * 3.141592653589793 / sig.min_halfwidth()
    axes = [args.axis] if args.axis is not None else list(range(sig.dim))
    print("axis,p,magnitude")
    for axis in axes:
        for i in range(n):
            p_val = -span + 2.0 * span * i / n
            p = [0.0] * sig.dim
            p[axis] = p_val
            print(f"{axis},{p_val!r},{abs(evaluate(sig, p))!r}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forge",
        description="Construct and verify non-uniqueness instances for "
                    "Fourier phase retrieval.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example1", help="minimal two-tap pair")
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)
    p.add_argument("--b1", required=True)
    p.add_argument("--b2", required=True)
    p.add_argument("--y", required=True, help="tap offset, e.g. 1 or 1,0")
    p.add_argument("--z", required=True, help="atom offset")
    p.add_argument("--r", default="1/2", help="atom radius (default 1/2)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--discrete", action="store_true", default=True)
    group.add_argument("--continuous", action="store_true", default=False)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_example1)

    p = sub.add_parser("example2", help="three-tap pair with background split")
    p.add_argument("--a1", required=True)
    p.add_argument("--a2", required=True)
    p.add_argument("--phase", default="1", help="unit rotation, e.g. i or 3/5+4/5i")
    p.add_argument("--y", required=True)
    p.add_argument("--psi", help="source signal JSON (path, -, or inline)")
    p.add_argument("--rho")
    p.add_argument("--center")
    p.add_argument("--grid", type=int, default=4096)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--discrete", action="store_true", default=True)
    group.add_argument("--continuous", action="store_true", default=False)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_example2)

    for name, func, help_text in (
        ("thm1", _cmd_thm1, "stencil/adjoint pair from explicit inputs"),
        ("thm2", _cmd_thm2, "symmetric-stencil Pauli pair from explicit inputs"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--stencil", required=True, help="stencil JSON (path, -, inline)")
        p.add_argument("--psi", required=True, help="source JSON (path, -, inline)")
        p.add_argument("--grid", type=int, default=4096)
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("thm3", help="reflection background instance")
    p.add_argument("--psi", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--u0", required=True, help='body JSON or "lo:hi" interval')
    p.add_argument("--u1", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_thm3)

    p = sub.add_parser("thm4", help="masked background from a separated translate")
    p.add_argument("--stencil", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--body", required=True)
    p.add_argument("--ystar", required=True)
    p.add_argument("--phase")
    p.add_argument("--grid", type=int, default=4096)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_thm4)

    p = sub.add_parser("verify", help="run a bundle's claims")
    p.add_argument("bundle", help="bundle JSON (path or -)")
    p.add_argument("--report", help="also write the report to this path")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("campaign", help="randomized validity campaign")
    p.add_argument("--count", type=int, default=500)
    p.add_argument("--controls", type=int, default=200)
    p.add_argument("--dims", default="1,2,3")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--csv", help="write one row per instance to this path")
    p.set_defaults(func=_cmd_campaign)

    p = sub.add_parser("solve", help="alternating-projection demo on a bundle")
    p.add_argument("bundle")
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--iterations", type=int, default=800)
    p.add_argument("--grid", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("spectrum", help="CSV of |transform| along axis slices")
    p.add_argument("signal", help="signal JSON (path or -)")
    p.add_argument("--grid", type=int, default=256)
    p.add_argument("--axis", type=int)
    p.set_defaults(func=_cmd_spectrum)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PreconditionError as e:
        _diag("precondition", e.detail, condition=e.condition)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as e:
        _diag("invalid-input", str(e))
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
