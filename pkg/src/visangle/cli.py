"""Command-line front end.

Exit codes: 0 pass, 1 usage or parse error, 2 domain or point error,
3 theorem suite with violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import verify
from .domains import Generic2D, HalfSpace, Polygon, PuncturedSpace, UnitBall
from .errors import InvalidParameter, UnsupportedDomain, VisangleError
from .metrics import evaluate
from .sup import BoundarySampler
from .values import METRIC_IDS

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, allow_nan=False))


def _fail(code: int, kind: str, message: str) -> int:
    _emit({"error": kind, "message": message, "exit_code": code})
    return code


# -- domain files and coordinates --------------------------------------------------


def parse_coords(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"coordinates must be comma-separated decimals, got {text!r}") from None
    if len(vals) < 2:
        raise UsageError(f"need at least 2 coordinates, got {text!r}")
    return np.array(vals)


def domain_from_spec(spec: dict):
    """Build a domain from a DomainFile document."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise UsageError('domain file must be an object with a "type" field')
    kind = spec["type"]
    n = spec.get("n", 2)
    if not isinstance(n, int) or isinstance(n, bool):
        raise UsageError('"n" must be an integer')
    if kind == "ball":
        return UnitBall(n)
    if kind == "halfspace":
        return HalfSpace(n)
    if kind == "punctured":
        return PuncturedSpace(n)
    if kind == "polygon":
        if n != 2:
            raise UnsupportedDomain("polygon domains are planar (n = 2)")
        verts = spec.get("vertices")
        if not isinstance(verts, list) or len(verts) < 3:
            raise UsageError("polygon needs a list of >= 3 [x, y] vertices")
        try:
            arr = np.array(verts, dtype=float)
        except (TypeError, ValueError):
            raise UsageError("polygon vertices must be [x, y] number pairs") from None
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise UsageError("polygon vertices must be [x, y] number pairs")
        dom = Generic2D([Polygon(arr)])
        if dom.pseudometric:
            raise UnsupportedDomain("polygon vertices are collinear")
        return dom
    raise UsageError(f"unknown domain type {kind!r}")


def load_domain(arg: str, n: int | None):
    """``ball``/``halfspace``/``punctured`` or a path to a DomainFile JSON."""
    if arg in ("ball", "halfspace", "punctured"):
        return domain_from_spec({"type": arg, "n": n or 2}), n is not None
    path = Path(arg)
    if not path.is_file():
        raise UsageError(f"--domain must be ball, halfspace, punctured or a JSON file, got {arg!r}")
    try:
        spec = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse domain file: {exc}") from None
    dom = domain_from_spec(spec)
    if n is not None and n != dom.n:
        raise UsageError(f"--n {n} contradicts the domain file (n = {dom.n})")
    return dom, True


# -- commands ------------------------------------------------------------------------


def cmd_dist(args) -> int:
    x, y = parse_coords(args.x), parse_coords(args.y)
    if x.size != y.size:
        raise UsageError(f"x has {x.size} coordinates, y has {y.size}")
    dom, fixed = load_domain(args.domain, args.n)
    if not fixed and x.size != dom.n:
        dom, _ = load_domain(args.domain, x.size)
    if x.size != dom.n:
        raise UsageError(f"points have {x.size} coordinates, the domain has n = {dom.n}")
    sampler = None
    if dom.n == 2 and not isinstance(dom, PuncturedSpace):
        sampler = BoundarySampler(dom, coarse_count=args.coarse_count, pair_count=args.pair_count)
    val = evaluate(args.metric, dom, x, y, sampler)
    _emit({
        "metric": val.metric,
        "value": float(val),
        "method": val.method,
        "pseudometric_warning": bool(val.pseudometric_warning),
    })
    return EXIT_OK


def _suite_table():
    return {
        "bounds-ball": lambda a: verify.suite_bounds(UnitBall(a.n), a.trials, a.seed),
        "bounds-half": lambda a: verify.suite_bounds(HalfSpace(a.n), a.trials, a.seed),
        "equality-ball": lambda a: verify.suite_equality(UnitBall(a.n), a.trials, a.seed),
        "equality-half": lambda a: verify.suite_equality(HalfSpace(a.n), a.trials, a.seed),
        "lipschitz-ball": lambda a: verify.suite_lipschitz_ball(a.a, a.trials, a.seed),
        "lipschitz-half-ball": lambda a: verify.suite_lipschitz_half_ball(a.trials, a.seed),
        "lipschitz-ball-half": lambda a: verify.suite_lipschitz_ball_half(a.trials, a.seed),
        "lipschitz-half": lambda a: verify.suite_lipschitz_half(a.coeffs, a.trials, a.seed),
        "rho-star-invariance": lambda a: verify.suite_rho_star_invariance(a.trials, a.seed),
        "punctured": lambda a: verify.suite_punctured(a.trials, a.seed, a.n),
        "extremal-ball": lambda a: verify.suite_extremal_config(UnitBall(2), a.trials, a.seed),
        "extremal-half": lambda a: verify.suite_extremal_config(HalfSpace(2), a.trials, a.seed),
        "axioms-ball": lambda a: verify.suite_axioms(UnitBall(2), a.points, a.seed),
        "axioms-half": lambda a: verify.suite_axioms(HalfSpace(2), a.points, a.seed),
        "axioms-polygon": lambda a: verify.suite_axioms(
            verify.random_convex_polygon(np.random.default_rng(a.seed)), a.points, a.seed),
    }


def _output(rep, fmt: str) -> None:
    if fmt == "csv":
        sys.stdout.write(rep.to_csv())
    else:
        _emit(rep.to_dict())


def cmd_verify(args) -> int:
    table = _suite_table()
    if args.suite not in table:
        raise UsageError(f"unknown suite {args.suite!r}; expected one of {', '.join(table)}")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    rep = table[args.suite](args)
    _output(rep, args.format)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    if args.sweep not in verify.SWEEP_INTERVALS:
        raise UsageError(f"unknown sweep {args.sweep!r}; expected one of {', '.join(verify.SWEEP_INTERVALS)}")
    grid = verify.parse_grid(args.grid)
    rep = verify.sharpness_sweep(args.sweep, grid, a=args.a)
    _output(rep, args.format)
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_constant(args) -> int:
    doms = {"ball": UnitBall(2), "halfspace": HalfSpace(2), "punctured": PuncturedSpace(2)}
    if args.domain not in doms:
        raise UsageError(f"constant estimator domain must be one of {', '.join(doms)}")
    rep = verify.conjecture_constant(doms[args.domain], args.trials, args.seed)
    _output(rep, args.format)
    # informational: never a violation exit
    return EXIT_OK


def _coeffs(text: str):
    vals = parse_coords(text)
    if vals.size != 4:
        raise UsageError("--coeffs needs four numbers a,b,c,d")
    return tuple(vals)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="visangle", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    d = sub.add_parser("dist", help="evaluate one metric at a pair of points")
    d.add_argument("--metric", required=True, choices=METRIC_IDS)
    d.add_argument("--domain", required=True, help="ball, halfspace, punctured, or a DomainFile JSON path")
    d.add_argument("--x", required=True, help="comma-separated coordinates")
    d.add_argument("--y", required=True, help="comma-separated coordinates")
    d.add_argument("--n", type=int, default=None, help="dimension (checked against the points)")
    d.add_argument("--coarse-count", type=int, default=4096)
    d.add_argument("--pair-count", type=int, default=128)
    d.set_defaults(func=cmd_dist)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    v.add_argument("--trials", type=int, default=10_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int, default=2)
    v.add_argument("--a", type=float, default=0.999, help="|a| for lipschitz-ball")
    v.add_argument("--coeffs", type=_coeffs, default=(1.0, 1.0, 1.0, 2.0),
                   help="a,b,c,d for lipschitz-half")
    v.add_argument("--points", type=int, default=42, help="pool size for the axiom suites")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="tabulate a sharpness family")
    s.add_argument("sweep")
    s.add_argument("--grid", required=True, help="start:stop:count")
    s.add_argument("--a", type=float, default=0.999)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("constant", help="estimate sup v/j")
    c.add_argument("domain")
    c.add_argument("--trials", type=int, default=100_000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_constant)
    return p


_VALUE_FLAGS = ("--x", "--y", "--coeffs")


def _join_values(argv: list) -> list:
    """``--x -0.5,0`` -> ``--x=-0.5,0`` so negative coordinates parse."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: dist, verify, sweep or constant")
        return args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "UsageError", str(exc))
    except InvalidParameter as exc:
        # bad flag values, grids and malformed boundary data
        return _fail(EXIT_USAGE, type(exc).__name__, str(exc))
    except VisangleError as exc:
        return _fail(EXIT_DOMAIN, type(exc).__name__, str(exc))


if __name__ == "__main__":
    sys.exit(main())
