"""Numerical reproduction harness for the inequalities between the metrics.

Every suite returns a :class:`VerificationReport`.  Suites are pure given
their seed: the same arguments give the same report.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize

from .closed_form import (
    j_many,
    k_punctured,
    rho_ball_many,
    rho_half_many,
    rho_star_many,
    v_closed_many,
)
from .domains import BOUNDARY_EPS, Domain, Generic2D, HalfSpace, PuncturedSpace, UnitBall
from .errors import InvalidGrid, InvalidParameter, MapDomainMismatch, UnsupportedDomain
from .geometry import vector_angle
from .moebius import MoebiusMap, canonical_T_a, cayley_half_to_ball, real_fractional
from .sup import BoundarySampler, r_ptolemaic, s_triangular, v_double, v_sup

THEOREM_TOL = 1e-9
SAMPLED_TOL = 1e-6
# rejection distance from the boundary for random samples
SAMPLE_MARGIN = 1e-6
PUNCTURED_CONSTANT = math.pi / math.log(3.0)
CONJECTURED = {"ball": (1.431, 1.432), "halfspace": (1.432, 1.433)}


@dataclass
class VerificationReport:
    suite_id: str
    trials: int
    violations: int
    worst_margin: float
    seed: int
    estimate: float | None = None
    sweep: list | None = None
    informational: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.informational or self.violations == 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        if d["sweep"] is not None:
            d["sweep"] = [[float(p), float(v)] for p, v in d["sweep"]]
        return _json_safe(d)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.sweep is not None:
            w.writerow(["param", "ratio"])
            for p, v in self.sweep:
                w.writerow([fmt(p), fmt(v)])
        else:
            w.writerow(["suite_id", "trials", "violations", "worst_margin", "estimate", "seed"])
            w.writerow([self.suite_id, self.trials, self.violations, fmt(self.worst_margin),
                        fmt(self.estimate), self.seed])
        return buf.getvalue()


def fmt(value) -> str:
    """12 significant digits, locale independent; empty when not finite."""
    if value is None or not math.isfinite(float(value)):
        return ""
    return format(float(value), ".12g")


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _report(suite_id, margins, tol, seed, **kw) -> VerificationReport:
    margins = np.asarray(margins, dtype=float).ravel()
    return VerificationReport(
        suite_id=suite_id,
        trials=kw.pop("trials", margins.size),
        violations=int(np.count_nonzero(margins < -tol)),
        worst_margin=float(margins.min()) if margins.size else math.inf,
        seed=seed,
        **kw,
    )


# -- random samples ------------------------------------------------------------


def _heavy_depth(rng, count):
    # distance to the boundary spread over 1e-1 .. 1e-6
    return 10.0 ** -rng.uniform(1.0, -math.log10(SAMPLE_MARGIN), count)


def sample_points(domain: Domain, count: int, rng: np.random.Generator,
                  heavy_fraction: float = 0.25) -> np.ndarray:
    """Random points of ``domain``, a fraction of them very close to the boundary.

    Bulk points are uniform in the disk/ball or in the box
    ``[-1,1]^(n-1) x (0,2]``; points within ``SAMPLE_MARGIN`` of the
    boundary are rejected.
    """
    n = domain.n
    heavy = int(round(count * heavy_fraction))
    bulk = count - heavy
    if isinstance(domain, UnitBall):
        def dirs(m):
            d = rng.normal(size=(m, n))
            return d / np.linalg.norm(d, axis=1, keepdims=True)
        out = []
        while sum(len(o) for o in out) < bulk:
            r = rng.uniform(size=bulk) ** (1.0 / n)
            out.append(dirs(bulk)[r < 1.0 - SAMPLE_MARGIN] * r[r < 1.0 - SAMPLE_MARGIN, None])
        pts = np.concatenate(out)[:bulk]
        near = dirs(heavy) * (1.0 - _heavy_depth(rng, heavy))[:, None]
        return np.concatenate([pts, near])
    if isinstance(domain, HalfSpace):
        pts = rng.uniform(-1.0, 1.0, size=(count, n))
        pts[:bulk, -1] = rng.uniform(SAMPLE_MARGIN, 2.0, size=bulk)
        pts[bulk:, -1] = _heavy_depth(rng, heavy)
        return pts
    if isinstance(domain, PuncturedSpace):
        d = rng.normal(size=(count, n))
        d /= np.linalg.norm(d, axis=1, keepdims=True)
        return d * 10.0 ** rng.uniform(-3.0, 3.0, count)[:, None]
    if isinstance(domain, Generic2D):
        return _sample_generic(domain, count, heavy, rng)
    raise UnsupportedDomain(f"cannot sample {domain}")


def _sample_generic(domain: Generic2D, count, heavy, rng):
    if domain.unbounded:
        raise UnsupportedDomain("random points of an unbounded generic domain are not supported")
    verts = [pc.vertices for pc in domain.pieces if hasattr(pc, "vertices")]
    verts += [np.array([pc.center - pc.radius, pc.center + pc.radius]) for pc in domain.pieces
              if not hasattr(pc, "vertices")]
    allv = np.vstack(verts)
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    out = []
    while len(out) < count - heavy:
        p = rng.uniform(lo, hi)
        if domain.contains(p) and domain.boundary_distance(p) > SAMPLE_MARGIN:
            out.append(p)
    # near-boundary points: push an interior point toward its nearest boundary point
    while len(out) < count:
        p = rng.uniform(lo, hi)
        if not domain.contains(p):
            continue
        pc = min(domain.pieces, key=lambda q: q.distance(p))
        b = pc.point_at(pc.nearest_param(p))
        dist = float(np.linalg.norm(p - b))
        q = b + (p - b) * (_heavy_depth(rng, 1)[0] / dist)
        if domain.contains(q) and domain.boundary_distance(q) > SAMPLE_MARGIN:
            out.append(q)
    return np.array(out)


def sample_pairs(domain: Domain, count: int, rng: np.random.Generator):
    X = sample_points(domain, count, rng)
    Y = sample_points(domain, count, rng)
    # shuffle so near-boundary points meet bulk points too
    Y = Y[rng.permutation(count)]
    keep = np.any(X != Y, axis=1)
    return X[keep], Y[keep]


def _interior_margin(domain, P):
    if isinstance(domain, UnitBall):
        return 1.0 - np.linalg.norm(P, axis=-1)
    if isinstance(domain, HalfSpace):
        return P[..., -1]
    raise UnsupportedDomain(f"no interior margin for {domain}")


def _rho_many(domain, X, Y):
    return rho_ball_many(X, Y) if isinstance(domain, UnitBall) else rho_half_many(X, Y)


def _check_canonical(domain):
    if not isinstance(domain, (UnitBall, HalfSpace)):
        raise UnsupportedDomain(f"suite needs the unit ball or the half-space, got {domain}")
    if domain.n not in (2, 3):
        raise InvalidParameter("suite dimension must be 2 or 3")


# -- bounds between v and the hyperbolic metric ------------------------------------


def sweep_points(theorem_id: str, t: float):
    """Point pair of a sharpness family at parameter ``t``."""
    if theorem_id == "thm1_1_ball":
        # x, y on the circle of radius 1 - s tangent to the unit circle at 1
        return np.array([t, 1.0 - t]), np.array([t, t - 1.0])
    if theorem_id == "thm1_1_half":
        return np.array([-1.0, t]), np.array([1.0, t])
    if theorem_id == "thm1_2":
        return np.array([0.0, t]), np.array([0.0, -t])
    if theorem_id == "thm1_3_upper":
        return np.array([-2.0 * t / math.sqrt(1.0 - t * t), 1.0]), np.array([0.0, (1.0 + t) / (1.0 - t)])
    if theorem_id == "thm1_3_lower":
        q = t * t + 4.0
        return np.array([0.0, 0.0]), np.array([t * t / q, -2.0 * t / q])
    if theorem_id == "thm1_4_case2":
        return t * np.array([math.cos(math.pi - t), math.sin(math.pi - t)]), np.array([0.0, t / math.sin(t)])
    raise InvalidParameter(f"unknown sweep {theorem_id!r}")


SWEEP_INTERVALS = {
    "thm1_1_ball": (0.0, 1.0),
    "thm1_1_half": (0.0, math.inf),
    "thm1_2": (0.0, 1.0),
    "thm1_3_upper": (0.0, 1.0),
    "thm1_3_lower": (0.0, math.inf),
    "thm1_4_case2": (0.0, 0.5 * math.pi),
}


def suite_bounds(domain: Domain, trials: int = 10_000, seed: int = 0,
                 sweep_grid=None) -> VerificationReport:
    """``ρ* <= v <= 2ρ*`` and ``v <= ρ`` on random pairs, plus the sharpness sweep.

    The sweep (planar family, embedded in the first two coordinates) is
    recorded in the report and its ratios must stay ``<= 2``.
    """
    _check_canonical(domain)
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    rng = np.random.default_rng(seed)
    X, Y = sample_pairs(domain, trials, rng)
    v = v_closed_many(domain, X, Y)
    rs = rho_star_many(domain, X, Y)
    rho = _rho_many(domain, X, Y)
    margins = np.stack([v - rs, 2.0 * rs - v, rho - v])

    sweep_id = "thm1_1_ball" if isinstance(domain, UnitBall) else "thm1_1_half"
    if sweep_grid is None:
        sweep_grid = [0.9, 0.99, 0.999, 0.9999] if isinstance(domain, UnitBall) else [1e-1, 1e-2, 1e-3, 1e-4]
    sw = sharpness_sweep(sweep_id, sweep_grid, n=domain.n)
    rep = _report(f"bounds-{_short(domain)}{domain.n}", margins, THEOREM_TOL, seed,
                  trials=int(X.shape[0]), sweep=sw.sweep)
    rep.violations += sw.violations
    rep.estimate = sw.estimate
    rep.notes = {
        "lower_margin": float((v - rs).min()),
        "upper_margin": float((2.0 * rs - v).min()),
        "rho_margin": float((rho - v).min()),
        "max_v_over_rho_star": float(np.max(v / rs)),
        "sweep_id": sweep_id,
        "sweep_deviation": sw.notes["max_deviation"],
    }
    return rep


def _short(domain) -> str:
    return {UnitBall: "ball", HalfSpace: "half", PuncturedSpace: "punctured"}.get(type(domain), "generic")


# -- sharpness sweeps --------------------------------------------------------------


def _expected_ratio(theorem_id: str, t: float, a: float) -> float:
    """Exact ratio of each family, derived by hand from its closed forms."""
    if theorem_id == "thm1_1_ball":
        return 0.5 * math.pi / math.atan(1.0 / t)
    if theorem_id in ("thm1_1_half", "thm1_3_lower"):
        return 2.0
    if theorem_id == "thm1_2":
        return math.atan(t * (1.0 + a) / (1.0 - a * t * t)) / math.atan(t)
    if theorem_id == "thm1_3_upper":
        vb = 2.0 * math.atan(t * math.sqrt(1.0 - t) / (math.sqrt(2.0) - t * math.sqrt(1.0 + t)))
        u = math.sqrt(1.0 - t * t)
        w = math.sqrt(1.0 - t)
        vh = math.acos((math.sqrt(2.0) * u - w) / (math.sqrt(2.0) - u * w))
        return vb / vh
    if theorem_id == "thm1_4_case2":
        s, c = math.sin(t), math.cos(t)
        return math.acos((4 * s * s - c * c) / (4 * s * s + c * c)) / math.acos(s)
    raise InvalidParameter(theorem_id)


def _sweep_ratio(theorem_id: str, t: float, a: float, n: int) -> float:
    x, y = sweep_points(theorem_id, t)
    if n > 2:
        # planar family in the (first, last) coordinate plane
        pad = np.zeros(n - 2)
        x, y = np.concatenate([x[:1], pad, x[1:]]), np.concatenate([y[:1], pad, y[1:]])
    ball, half = UnitBall(n), HalfSpace(n)
    if theorem_id in ("thm1_1_ball", "thm1_1_half"):
        dom = ball if theorem_id == "thm1_1_ball" else half
        return float(v_closed_many(dom, x, y) / rho_star_many(dom, x, y))
    if theorem_id == "thm1_2":
        f = canonical_T_a([a, 0.0])
        return float(v_closed_many(ball, f(x), f(y)) / v_closed_many(ball, x, y))
    if theorem_id == "thm1_3_upper":
        f = cayley_half_to_ball()
        return float(v_closed_many(ball, f(x), f(y)) / v_closed_many(half, x, y))
    if theorem_id == "thm1_3_lower":
        g = cayley_half_to_ball().inverse()
        return float(v_closed_many(half, g(x), g(y)) / v_closed_many(ball, x, y))
    # thm1_4_case2: z -> -1/z
    f = real_fractional(0.0, -1.0, 1.0, 0.0)
    return float(v_closed_many(half, f(x), f(y)) / v_closed_many(half, x, y))


def _check_grid(theorem_id, grid):
    try:
        g = np.asarray(list(grid), dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidGrid(f"grid is not a list of numbers: {exc}") from None
    if g.size == 0:
        raise InvalidGrid("empty grid")
    if not np.all(np.isfinite(g)):
        raise InvalidGrid("grid contains non-finite values")
    lo, hi = SWEEP_INTERVALS[theorem_id]
    if np.any(g <= lo) or np.any(g >= hi):
        raise InvalidGrid(f"{theorem_id} grid must lie in the open interval ({lo}, {hi})")
    return np.unique(g)


def sharpness_sweep(theorem_id: str, grid, a: float = 0.999, n: int = 2,
                    tol: float = THEOREM_TOL) -> VerificationReport:
    """Evaluate a sharpness family on ``grid`` and record the ratio column.

    Families: ``thm1_1_ball`` (v/ρ* in the disk, parameter s = 1 - t),
    ``thm1_1_half`` (v/ρ* for level pairs in the half-plane),
    ``thm1_2`` (disk automorphism ``T_a`` on ``±it``),
    ``thm1_3_upper`` / ``thm1_3_lower`` (Cayley map and its inverse),
    ``thm1_4_case2`` (``z -> -1/z`` on the half-plane).

    Violations: a ratio above 2 + tol, or a ratio differing from the
    family's closed expression by more than ``tol`` (relative).
    """
    if theorem_id not in SWEEP_INTERVALS:
        raise InvalidParameter(f"unknown sweep {theorem_id!r}; expected one of {', '.join(SWEEP_INTERVALS)}")
    if not 0.0 < a < 1.0:
        raise InvalidParameter("a must lie in (0, 1)")
    g = _check_grid(theorem_id, grid)
    ratios = np.array([_sweep_ratio(theorem_id, t, a, n) for t in g])
    expected = np.array([_expected_ratio(theorem_id, t, a) for t in g])
    dev = np.abs(ratios - expected) / np.maximum(1.0, np.abs(expected))
    margins = np.concatenate([2.0 - ratios, -dev])
    rep = _report(theorem_id, margins, tol, 0, trials=int(g.size), sweep=list(zip(g.tolist(), ratios.tolist())))
    # the end of the grid closest to the limit
    limit_end = 0 if theorem_id == "thm1_4_case2" else -1
    rep.estimate = float(ratios[limit_end])
    diffs = np.diff(ratios)
    rep.notes = {
        "max_deviation": float(dev.max()),
        "monotone_toward_limit": bool(np.all(diffs >= -tol) or np.all(diffs <= tol)),
        "a": a if theorem_id == "thm1_2" else None,
    }
    return rep


def parse_grid(spec: str) -> np.ndarray:
    """``"start:stop:count"`` to a linspace; raises InvalidGrid."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InvalidGrid(f"grid spec {spec!r} must be start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InvalidGrid(f"bad grid spec {spec!r}") from None
    if count < 1:
        raise InvalidGrid("grid count must be >= 1")
    return np.linspace(start, stop, count)


# -- Lipschitz constants under Möbius maps ---------------------------------------


def lipschitz_ratio(fmap: MoebiusMap, source: Domain, target: Domain, trials: int = 10_000,
                    seed: int = 0, extra_pairs=None, bounds=(0.5, 2.0),
                    tol: float = SAMPLED_TOL, suite_id: str = "lipschitz") -> VerificationReport:
    """Estimate ``sup v_target(f x, f y) / v_source(x, y)``.

    Random pairs from ``source`` are mapped and compared; ``extra_pairs``
    (for instance a sharpness family) are added to the sample.  Ratios outside
    ``bounds`` by more than ``tol`` count as violations.
    """
    _check_canonical(source)
    _check_canonical(target)
    rng = np.random.default_rng(seed)
    X, Y = sample_pairs(source, trials, rng)
    n_random = X.shape[0]
    if extra_pairs:
        ex = np.array([p[0] for p in extra_pairs], dtype=float)
        ey = np.array([p[1] for p in extra_pairs], dtype=float)
        X, Y = np.concatenate([X, ex]), np.concatenate([Y, ey])
    FX, FY = fmap.apply_array(X), fmap.apply_array(Y)
    margin = np.minimum(_interior_margin(target, FX), _interior_margin(target, FY))
    if np.any(margin < -1e-9):
        raise MapDomainMismatch(f"map sends sample points outside {target} (worst {margin.min():.3g})")
    ok = margin > 0.0
    v_src = v_closed_many(source, X[ok], Y[ok])
    v_tgt = v_closed_many(target, FX[ok], FY[ok])
    ratio = v_tgt / v_src
    lo, hi = bounds
    margins = np.minimum(ratio - lo, hi - ratio)
    rep = _report(suite_id, margins, tol, seed, trials=int(X.shape[0]))
    rep.estimate = float(ratio.max())
    n_ok_random = int(np.count_nonzero(ok[:n_random]))
    rep.notes = {
        "min_ratio": float(ratio.min()),
        "random_max": float(ratio[:n_ok_random].max()) if n_ok_random else None,
        "family_max": float(ratio[n_ok_random:].max()) if ratio.size > n_ok_random else None,
        "skipped_on_boundary": int(np.count_nonzero(~ok)),
        "map_length": len(fmap),
    }
    return rep


def thm1_2_family(count: int = 60):
    """``x = it, y = -it`` with ``t`` approaching 1."""
    return [sweep_points("thm1_2", t) for t in 1.0 - np.logspace(-1, -8, count)]


def suite_lipschitz_ball(a: float = 0.999, trials: int = 10_000, seed: int = 0) -> VerificationReport:
    """``T_a`` on the disk, with the ``±it`` family."""
    rep = lipschitz_ratio(canonical_T_a([a, 0.0]), UnitBall(2), UnitBall(2), trials, seed,
                          extra_pairs=thm1_2_family(), suite_id="lipschitz-ball")
    target = 4.0 / math.pi * math.atan((1.0 + a) / (1.0 - a))
    rep.notes.update(a=a, conjectured_sup=target, gap_to_conjecture=target - rep.estimate)
    return rep


def suite_lipschitz_half_ball(trials: int = 10_000, seed: int = 0) -> VerificationReport:
    """Cayley map from the half-plane to the disk, with the upper family."""
    fam = [sweep_points("thm1_3_upper", t) for t in 1.0 - np.logspace(-1, -6, 40)]
    return lipschitz_ratio(cayley_half_to_ball(), HalfSpace(2), UnitBall(2), trials, seed,
                           extra_pairs=fam, suite_id="lipschitz-half-ball")


def suite_lipschitz_ball_half(trials: int = 10_000, seed: int = 0) -> VerificationReport:
    """Inverse Cayley map from the disk to the half-plane, with the lower family."""
    fam = [sweep_points("thm1_3_lower", t) for t in np.logspace(-3, 3, 40)]
    return lipschitz_ratio(cayley_half_to_ball().inverse(), UnitBall(2), HalfSpace(2), trials, seed,
                           extra_pairs=fam, suite_id="lipschitz-ball-half")


def suite_lipschitz_half(coeffs=(1.0, 1.0, 1.0, 2.0), trials: int = 10_000,
                         seed: int = 0) -> VerificationReport:
    """``z -> (az+b)/(cz+d)`` on the half-plane.

    With ``c != 0, d != 0`` the pair ``i, i d²/c²`` is added (ratio 2);
    with ``d = 0`` the ``-1/z`` family; with ``c = 0`` every ratio must be 1.
    """
    a, b, c, d = (float(v) for v in coeffs)
    f = real_fractional(a, b, c, d)
    if c == 0.0:
        return lipschitz_ratio(f, HalfSpace(2), HalfSpace(2), trials, seed, bounds=(1.0, 1.0),
                               tol=THEOREM_TOL, suite_id="lipschitz-half")
    if d != 0.0:
        extra = [(np.array([0.0, 1.0]), np.array([0.0, d * d / (c * c)]))]
    else:
        # -1/z family, transported by the similarity part of f
        extra = [sweep_points("thm1_4_case2", t) for t in np.logspace(-4, 0, 40)]
    return lipschitz_ratio(f, HalfSpace(2), HalfSpace(2), trials, seed, extra_pairs=extra,
                           suite_id="lipschitz-half")


# -- Möbius invariance of ρ* --------------------------------------------------------


def suite_rho_star_invariance(trials: int = 10_000, seed: int = 0) -> VerificationReport:
    """``ρ*`` is unchanged by disk automorphisms and the Cayley map."""
    rng = np.random.default_rng(seed)
    ball, half = UnitBall(2), HalfSpace(2)
    X, Y = sample_pairs(ball, trials, rng)
    errs = []
    for a in sample_points(ball, 5, rng, heavy_fraction=0.0):
        T = canonical_T_a(a)
        errs.append(np.abs(rho_star_many(ball, T.apply_array(X), T.apply_array(Y))
                           - rho_star_many(ball, X, Y)))
    HX, HY = sample_pairs(half, trials, rng)
    C = cayley_half_to_ball()
    errs.append(np.abs(rho_star_many(ball, C.apply_array(HX), C.apply_array(HY))
                       - rho_star_many(half, HX, HY)))
    err = np.concatenate(errs)
    rep = _report("rho-star-invariance", THEOREM_TOL - err, 0.0, seed)
    rep.estimate = float(err.max())
    return rep


# -- equality cases of tan v = sinh(rho/2) -------------------------------------------


def suite_equality(domain: Domain, trials: int = 1000, seed: int = 0) -> VerificationReport:
    """``tan v = sinh(ρ/2)`` on the equality configurations, and not off them.

    Ball: ``0, x, y`` collinear.  Half-space: ``x, y`` on a vertical line.
    Perturbed pairs rotate (ball) or shift (half-space) one point by a
    definite amount and must miss the identity by more than 1e-6.
    """
    _check_canonical(domain)
    rng = np.random.default_rng(seed)
    n = domain.n
    if isinstance(domain, UnitBall):
        u = rng.normal(size=(trials, n))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        s = rng.uniform(-0.999, 0.999, size=(trials, 2))
        X, Y = u * s[:, :1], u * s[:, 1:]
        # perturbed: both norms in [0.2, 0.95], y rotated off the line through 0 and x
        r = rng.uniform(0.2, 0.95, size=(trials, 2))
        ang = rng.uniform(0.1, 1.0, trials) * rng.choice([-1.0, 1.0], trials)
        base = rng.uniform(0.0, 2 * math.pi, trials)
        PX = np.zeros((trials, n))
        PY = np.zeros((trials, n))
        PX[:, 0], PX[:, 1] = r[:, 0] * np.cos(base), r[:, 0] * np.sin(base)
        PY[:, 0], PY[:, 1] = r[:, 1] * np.cos(base + ang), r[:, 1] * np.sin(base + ang)
    else:
        X = rng.uniform(-1.0, 1.0, size=(trials, n))
        X[:, -1] = 10.0 ** rng.uniform(-3.0, 1.0, trials)
        Y = X.copy()
        Y[:, -1] = 10.0 ** rng.uniform(-3.0, 1.0, trials)
        PX = X.copy()
        PY = Y.copy()
        # horizontal shift comparable to the heights
        PY[:, 0] += rng.uniform(0.2, 1.0, trials) * np.maximum(X[:, -1], Y[:, -1])
    keep = np.any(X != Y, axis=1)
    X, Y = X[keep], Y[keep]

    def residual(A, B):
        v = v_closed_many(domain, A, B)
        sh = np.sinh(0.5 * _rho_many(domain, A, B))
        # compare angles rather than tangents: tan blows up near v = π/2
        return np.abs(np.tan(v) - sh), np.abs(v - np.arctan(sh))

    res_eq, ang_eq = residual(X, Y)
    res_pert, ang_pert = residual(PX, PY)
    # equality residual measured on the angle when tan v is large
    eq_err = np.where(np.abs(np.tan(v_closed_many(domain, X, Y))) > 1.0, ang_eq, res_eq)
    margins = np.concatenate([THEOREM_TOL - eq_err, res_pert - SAMPLED_TOL])
    rep = _report(f"equality-{_short(domain)}{n}", margins, 0.0, seed)
    rep.notes = {
        "max_equality_residual": float(eq_err.max()),
        "min_perturbed_residual": float(res_pert.min()),
        "min_perturbed_angle_gap": float(ang_pert.min()),
    }
    return rep


# -- punctured space ---------------------------------------------------------------


def suite_punctured(trials: int = 10_000, seed: int = 0, n: int = 2) -> VerificationReport:
    """``v = sqrt(k² - log²(|y|/|x|))`` and ``v <= (π/log 3) j``, equality at ``x = -y``."""
    rng = np.random.default_rng(seed)
    dom = PuncturedSpace(n)
    X, Y = sample_pairs(dom, trials, rng)
    v = vector_angle(X, Y)
    k = np.array([float(k_punctured(x, y)) for x, y in zip(X, Y)])
    lr = np.log(np.linalg.norm(Y, axis=1) / np.linalg.norm(X, axis=1))
    ident = np.abs(v - np.sqrt(np.maximum(k * k - lr * lr, 0.0)))
    j = j_many(dom, X, Y)
    bound = PUNCTURED_CONSTANT * j - v
    # antipodal pairs attain the constant
    A = sample_points(dom, max(trials // 10, 1), rng)
    eq = np.abs(PUNCTURED_CONSTANT * j_many(dom, A, -A) - vector_angle(A, -A))
    margins = np.concatenate([THEOREM_TOL - ident, bound + THEOREM_TOL, THEOREM_TOL - eq])
    rep = _report("punctured", margins, 0.0, seed)
    rep.estimate = float(np.max(v / j))
    rep.notes = {"max_identity_error": float(ident.max()), "max_antipodal_gap": float(eq.max()),
                 "constant": PUNCTURED_CONSTANT}
    return rep


# -- extremal configurations on tangent circles ---------------------------------------


def suite_extremal_config(domain: Domain, trials: int = 1000, seed: int = 0) -> VerificationReport:
    """Symmetric pairs maximize the boundary-distance product on a tangent circle.

    For a circle internally tangent to the boundary at ``z`` and chords
    ``[x, y]`` seen from ``z`` under a fixed angle α, the pair placed
    symmetrically about the diameter through ``z`` maximizes
    ``(1-|x|²)(1-|y|²)`` (ball) or ``x₂ y₂`` (half-plane), and so
    minimizes ρ among those chords.  A quarter of the trials use α = π/2
    and a few use the symmetric pair itself (equality).
    """
    _check_canonical(domain)
    if domain.n != 2:
        raise InvalidParameter("extremal configuration suite is planar")
    rng = np.random.default_rng(seed)
    alpha = rng.uniform(0.05, math.pi - 0.05, trials)
    alpha[: trials // 4] = 0.5 * math.pi
    ball = isinstance(domain, UnitBall)
    if ball:
        phi = rng.uniform(0.0, 2 * math.pi, trials)
        r = rng.uniform(0.05, 0.95, trials)
        center = (1.0 - r)[:, None] * np.stack([np.cos(phi), np.sin(phi)], axis=1)
        towards_z = phi
    else:
        r = 10.0 ** rng.uniform(-2.0, 2.0, trials)
        center = np.stack([rng.uniform(-5.0, 5.0, trials), r], axis=1)
        towards_z = np.full(trials, -0.5 * math.pi)
    # arc midpoint direction: opposite z, offset by delta with |delta| < π - α
    delta = rng.uniform(-1.0, 1.0, trials) * (math.pi - alpha) * 0.999
    delta[trials // 4: trials // 4 + max(trials // 50, 1)] = 0.0
    psi = towards_z + math.pi + delta
    psi0 = towards_z + math.pi

    def on_circle(ang):
        return center + r[:, None] * np.stack([np.cos(ang), np.sin(ang)], axis=1)

    X, Y = on_circle(psi - alpha), on_circle(psi + alpha)
    XS, YS = on_circle(psi0 - alpha), on_circle(psi0 + alpha)
    if ball:
        prod = (1 - np.sum(X * X, 1)) * (1 - np.sum(Y * Y, 1))
        prod_s = (1 - np.sum(XS * XS, 1)) * (1 - np.sum(YS * YS, 1))
    else:
        prod, prod_s = X[:, 1] * Y[:, 1], XS[:, 1] * YS[:, 1]
    z = center + r[:, None] * np.stack([np.cos(towards_z), np.sin(towards_z)], axis=1)
    angle_err = np.abs(vector_angle(X - z, Y - z) - alpha)
    rel = (prod_s - prod) / prod_s
    rho_gap = _rho_many(domain, X, Y) - _rho_many(domain, XS, YS)
    margins = np.concatenate([rel + 1e-10, rho_gap + THEOREM_TOL, 1e-9 - angle_err])
    rep = _report(f"extremal-{_short(domain)}", margins, 0.0, seed)
    sym = delta == 0.0
    rep.notes = {
        "symmetric_equality_error": float(np.abs(rel[sym]).max()) if sym.any() else None,
        "min_strict_gap": float(rel[~sym].min()),
        "right_angle_trials": int(np.count_nonzero(alpha == 0.5 * math.pi)),
    }
    return rep


# -- conjectured constants for v <= c j ---------------------------------------------


def _ratio_v_j(domain, X, Y):
    if isinstance(domain, PuncturedSpace):
        v = vector_angle(X, Y)
    else:
        v = v_closed_many(domain, X, Y)
    return v / j_many(domain, X, Y)


def _unpack(domain, p):
    # unconstrained coordinates onto the domain
    a, b = p[:2], p[2:]
    if isinstance(domain, UnitBall):
        def to_ball(q):
            nq = float(np.linalg.norm(q))
            return q * (math.tanh(nq) / nq) if nq > 0 else q
        return to_ball(a), to_ball(b)
    if isinstance(domain, HalfSpace):
        return np.array([a[0], math.exp(a[1])]), np.array([b[0], math.exp(b[1])])
    return a, b


def _pack(domain, x, y):
    def one(q):
        if isinstance(domain, UnitBall):
            nq = float(np.linalg.norm(q))
            return q * (math.atanh(nq) / nq) if nq > 0 else q
        if isinstance(domain, HalfSpace):
            return np.array([q[0], math.log(q[1])])
        return q
    return np.concatenate([one(x), one(y)])


def conjecture_constant(domain: Domain, trials: int = 100_000, seed: int = 0,
                        starts: int = 5) -> VerificationReport:
    """Estimate ``sup v/j`` by sampling plus Nelder-Mead from the best pairs.

    Informational: the estimate is compared with the conjectured interval
    but not asserted.  Sanity checks: ``1 <= estimate`` and, in the
    punctured plane, ``estimate <= π/log 3``.
    """
    if domain.n != 2 or not isinstance(domain, (UnitBall, HalfSpace, PuncturedSpace)):
        raise UnsupportedDomain("conjecture estimator runs on the disk, half-plane or punctured plane")
    rng = np.random.default_rng(seed)
    X, Y = sample_pairs(domain, trials, rng)
    # close pairs matter: add neighbours of the first points at small log-uniform offsets
    near = X[: trials // 2] + rng.normal(size=(trials // 2, 2)) * 10.0 ** rng.uniform(-4, 0, (trials // 2, 1))
    inside = np.array([domain.contains(p) and domain.boundary_distance(p) > SAMPLE_MARGIN for p in near])
    X = np.concatenate([X, X[: trials // 2][inside]])
    Y = np.concatenate([Y, near[inside]])
    ratios = _ratio_v_j(domain, X, Y)
    raw = float(ratios.max())

    def neg(p):
        x, y = _unpack(domain, p)
        if not (domain.contains(x) and domain.contains(y)) or np.array_equal(x, y):
            return 0.0
        if min(domain.boundary_distance(x), domain.boundary_distance(y)) <= BOUNDARY_EPS:
            return 0.0
        return -float(_ratio_v_j(domain, x, y))

    refined = raw
    for idx in np.argsort(-ratios)[:starts]:
        p0 = _pack(domain, X[idx], Y[idx])
        res = minimize(neg, p0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000, "maxfev": 8000})
        refined = max(refined, -float(res.fun))
    ceiling = PUNCTURED_CONSTANT if isinstance(domain, PuncturedSpace) else math.inf
    margins = np.array([refined - 1.0, ceiling + SAMPLED_TOL - refined])
    rep = _report(f"constant-{_short(domain)}", margins, 0.0, seed, trials=int(X.shape[0]))
    rep.estimate = refined
    rep.informational = True
    key = {UnitBall: "ball", HalfSpace: "halfspace"}.get(type(domain))
    interval = CONJECTURED.get(key)
    rep.notes = {
        "raw_estimate": raw,
        "refined_estimate": refined,
        "conjectured_interval": list(interval) if interval else [PUNCTURED_CONSTANT, PUNCTURED_CONSTANT],
        "inside_conjectured_interval": bool(interval[0] < refined < interval[1]) if interval else None,
    }
    return rep


# -- metric axioms for the sampled metrics ---------------------------------------------


AXIOM_METRICS = ("v", "s", "r", "vbar", "v_star", "vbar_star", "rho_star")


def random_convex_polygon(rng: np.random.Generator, vertices: int = 7) -> Generic2D:
    """Counterclockwise polygon with vertices at random angles on the unit circle."""
    while True:
        ang = np.sort(rng.uniform(0.0, 2 * math.pi, vertices))
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
        # keep the origin well inside
        if gaps.max() < 0.8 * math.pi:
            break
    from .domains import Polygon
    return Generic2D([Polygon(np.stack([np.cos(ang), np.sin(ang)], axis=1))])


def distance_matrices(domain: Domain, P: np.ndarray, metrics=AXIOM_METRICS,
                      sampler: BoundarySampler | None = None) -> dict:
    """All pairwise values of the requested metrics on the points ``P``."""
    sampler = sampler or BoundarySampler(domain)
    m = len(P)
    out = {k: np.zeros((m, m)) for k in metrics}
    closed_v = isinstance(domain, (UnitBall, HalfSpace))
    for i, j in itertools.combinations(range(m), 2):
        x, y = P[i], P[j]
        vals = {}
        if {"v", "v_star"} & set(metrics):
            vals["v"] = float(v_closed_many(domain, x, y)) if closed_v else float(v_sup(sampler, x, y))
            vals["v_star"] = math.sin(0.5 * vals["v"])
        if "s" in metrics:
            vals["s"] = float(s_triangular(sampler, x, y))
        if "r" in metrics:
            vals["r"] = float(r_ptolemaic(sampler, x, y))
        if {"vbar", "vbar_star"} & set(metrics):
            vals["vbar"] = float(v_double(sampler, x, y))
            vals["vbar_star"] = math.sin(0.5 * vals["vbar"])
        if "rho_star" in metrics:
            vals["rho_star"] = float(rho_star_many(domain, x, y))
        for k in metrics:
            out[k][i, j] = out[k][j, i] = vals[k]
    return out


def triangle_margins(D: np.ndarray) -> np.ndarray:
    """``D[i,j] + D[j,k] - D[i,k]`` over all ordered triples of distinct indices."""
    m = D.shape[0]
    M = D[:, :, None] + D[None, :, :] - D[:, None, :]
    i, j, k = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    distinct = (i != j) & (j != k) & (i != k)
    return M[distinct]


def suite_axioms(domain: Domain, points: int = 42, seed: int = 0, slack: float = 1e-7,
                 metrics=None) -> VerificationReport:
    """Triangle inequality and orderings on every triple from a random point pool.

    A pool of ``points`` random points yields ``C(points, 3)`` triples;
    each metric matrix is evaluated once per pair.  Orderings checked:
    ``v* <= s`` and ``v̄* <= r`` always, ``s <= r`` and ``v <= v̄`` when the
    boundary contains INF.
    """
    if domain.n != 2:
        raise UnsupportedDomain("axiom suite runs on planar domains")
    if metrics is None:
        metrics = AXIOM_METRICS if isinstance(domain, (UnitBall, HalfSpace)) else AXIOM_METRICS[:-1]
    rng = np.random.default_rng(seed)
    P = sample_points(domain, points, rng, heavy_fraction=0.2)
    D = distance_matrices(domain, P, metrics)
    margins = {k: triangle_margins(D[k]) for k in metrics}
    off = ~np.eye(points, dtype=bool)
    order = {}
    if "v_star" in D and "s" in D:
        order["v_star<=s"] = (D["s"] - D["v_star"])[off]
    if "vbar_star" in D and "r" in D:
        order["vbar_star<=r"] = (D["r"] - D["vbar_star"])[off]
    if domain.unbounded:
        if "s" in D and "r" in D:
            order["s<=r"] = (D["r"] - D["s"])[off]
        if "v" in D and "vbar" in D:
            order["v<=vbar"] = (D["vbar"] - D["v"])[off]
    allm = np.concatenate(list(margins.values()) + list(order.values()))
    rep = _report(f"axioms-{_short(domain)}", allm, slack, seed)
    rep.trials = math.comb(points, 3)
    rep.notes = {
        "triangle_worst": {k: float(v.min()) for k, v in margins.items()},
        "ordering_worst": {k: float(v.min()) for k, v in order.items()},
        "ordering_violations": {k: int(np.count_nonzero(v < -slack)) for k, v in order.items()},
        "pool_points": points,
    }
    return rep
