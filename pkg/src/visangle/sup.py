"""Supremum-based metrics over a sampled boundary.

Every metric here is a supremum over one or two boundary points of an
explicit integrand.  The boundary is cut into *charts*, each a map from
an interval of parameters onto a piece of the boundary; a coarse grid is
evaluated on every chart and the best ``seeds`` local peaks are polished by
golden-section search on the chart parameter.  Pair metrics polish the
best local peaks of the pair grid with a two-parameter pattern search.

On the unit disk and the upper half-plane these routines serve as the
independent oracle for the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domains import Domain, Generic2D, HalfSpace, PuncturedSpace, UnitBall
from .errors import InvalidParameter, KindMismatch, UnsupportedDomain
from .geometry import as_point, vector_angle
from .values import MetricValue

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Chart:
    """A boundary piece parametrized over ``[lo, hi]``."""

    point_at: object
    lo: float
    hi: float
    periodic: bool
    weight: float

    def params(self, count: int) -> np.ndarray:
        if self.periodic:
            return np.linspace(self.lo, self.hi, count, endpoint=False)
        # open ends: the half-line chart never reaches its endpoints
        return np.linspace(self.lo, self.hi, count + 2)[1:-1]


def _piece_chart(piece) -> Chart:
    return Chart(piece.point_at, 0.0, piece.length, piece.periodic, piece.length)


def _unit_circle(phi):
    phi = np.asarray(phi, dtype=float)
    return np.stack([np.cos(phi), np.sin(phi)], axis=-1)


@dataclass(frozen=True)
class BoundarySampler:
    """Sampling plan for suprema over the boundary of a planar domain."""

    domain: Domain
    coarse_count: int = 4096
    refine_tolerance: float = 1e-10
    include_infinity: bool | None = None
    seeds: int = 8
    pair_count: int = 128

    def __post_init__(self):
        if self.coarse_count < 16:
            raise InvalidParameter("coarse_count must be >= 16")
        if not self.refine_tolerance > 0.0:
            raise InvalidParameter("refine_tolerance must be positive")
        if self.pair_count < 16:
            raise InvalidParameter("pair_count must be >= 16")
        if self.domain.n != 2:
            raise UnsupportedDomain("boundary sampling is implemented for planar domains only")
        if self.include_infinity is None:
            object.__setattr__(self, "include_infinity", self.domain.unbounded)

    # -- boundary description -------------------------------------------------

    def charts(self, x, y) -> list:
        d = self.domain
        if isinstance(d, UnitBall):
            return [Chart(_unit_circle, 0.0, 2.0 * math.pi, True, 2.0 * math.pi)]
        if isinstance(d, HalfSpace):
            # tan-compactified real axis, centered and scaled on the pair
            c = 0.5 * (x[0] + y[0])
            s = max(x[1], y[1], float(np.linalg.norm(x - y)))

            def line(tau):
                tau = np.asarray(tau, dtype=float)
                return np.stack([c + s * np.tan(tau), np.zeros_like(tau)], axis=-1)

            lim = 0.5 * math.pi
            return [Chart(line, -lim, lim, False, 1.0)]
        if isinstance(d, Generic2D):
            return [_piece_chart(pc) for pc in d.pieces]
        raise UnsupportedDomain(f"no boundary charts for {d}")

    def _near_params(self, chart_index: int, chart: Chart, x, y) -> list:
        d = self.domain
        out = []
        for p in (x, y):
            if isinstance(d, UnitBall):
                out.append(math.atan2(p[1], p[0]) % (2.0 * math.pi))
            elif isinstance(d, HalfSpace):
                c = 0.5 * (x[0] + y[0])
                s = max(x[1], y[1], float(np.linalg.norm(x - y)))
                out.append(math.atan((p[0] - c) / s))
            else:
                out.append(d.pieces[chart_index].nearest_param(p))
        return out

    def samples(self, x, y, total: int) -> "SamplePlan":
        """Coarse parameters on every chart, plus the nearest-point seeds."""
        charts = self.charts(x, y)
        weights = np.array([c.weight for c in charts])
        counts = np.maximum(16, np.round(total * weights / weights.sum()).astype(int))
        owners, params, spacings = [], [], []
        for k, (ch, cnt) in enumerate(zip(charts, counts)):
            prm = np.concatenate([ch.params(int(cnt)), self._near_params(k, ch, x, y)])
            owners.append(np.full(prm.size, k))
            params.append(prm)
            spacings.append(np.full(prm.size, (ch.hi - ch.lo) / cnt))
        owners, params = np.concatenate(owners), np.concatenate(params)
        # boundary order, so grid neighbours are boundary neighbours
        order = np.lexsort((params, owners))
        return SamplePlan(charts, owners[order], params[order], np.concatenate(spacings)[order])


@dataclass(frozen=True)
class SamplePlan:
    """Flat list of boundary samples tagged with their chart."""

    charts: list
    owners: np.ndarray
    params: np.ndarray
    spacings: np.ndarray

    def points(self, owners, params) -> np.ndarray:
        owners = np.asarray(owners)
        params = np.asarray(params, dtype=float)
        if len(self.charts) == 1:
            return self.charts[0].point_at(params)
        out = np.empty(params.shape + (2,))
        for k in np.unique(owners):
            m = owners == k
            out[m] = self.charts[k].point_at(params[m])
        return out

    def clip(self, owners, params):
        """Clamp parameters on charts with ends; periodic charts wrap."""
        out = np.array(params, dtype=float)
        for k, ch in enumerate(self.charts):
            if not ch.periodic:
                m = np.broadcast_to(owners == k, out.shape)
                out[m] = np.clip(out[m], ch.lo, ch.hi)
        return out

    def bracket(self, owners, params, widths):
        """``params ± widths``, clipped on charts with ends."""
        lo = params - widths
        hi = params + widths
        for k, ch in enumerate(self.charts):
            if not ch.periodic:
                m = owners == k
                lo[m] = np.clip(lo[m], ch.lo, ch.hi)
                hi[m] = np.clip(hi[m], ch.lo, ch.hi)
        return lo, hi


def zoom_max_2d(f, t1, t2, h1, h2, tol: float, max_iter: int = 400):
    """Pattern-search maximization from several starts at once.

    Each pass evaluates a 5x5 grid of half-width ``h`` around every
    current point, moves to the best one, and halves ``h`` unless the
    winner sits on the grid edge (the peak lies further out).
    """
    offs = np.linspace(-1.0, 1.0, 5)
    o1, o2 = (a.ravel() for a in np.meshgrid(offs, offs, indexing="ij"))
    t1, t2 = np.array(t1, dtype=float), np.array(t2, dtype=float)
    h1, h2 = np.array(h1, dtype=float), np.array(h2, dtype=float)
    rows = np.arange(t1.size)
    best = f(t1[:, None], t2[:, None])[:, 0]
    for _ in range(max_iter):
        if np.all(np.maximum(h1, h2) <= tol):
            break
        T1 = t1[:, None] + h1[:, None] * o1
        T2 = t2[:, None] + h2[:, None] * o2
        V = f(T1, T2)
        k = np.argmax(V, axis=1)
        better = V[rows, k] > best
        t1 = np.where(better, T1[rows, k], t1)
        t2 = np.where(better, T2[rows, k], t2)
        best = np.where(better, V[rows, k], best)
        edge = better & ((np.abs(o1[k]) == 1.0) | (np.abs(o2[k]) == 1.0))
        h1 = np.where(edge, h1, 0.5 * h1)
        h2 = np.where(edge, h2, 0.5 * h2)
    return t1, t2, best


def local_peaks(values: np.ndarray) -> np.ndarray:
    """Mask of samples no smaller than their (cyclic) grid neighbours."""
    mask = np.isfinite(values)
    shifts = [-1, 0, 1]
    for dims in np.ndindex(*(3,) * values.ndim):
        off = tuple(shifts[k] for k in dims)
        if any(off):
            mask &= values >= np.roll(values, off, axis=tuple(range(values.ndim)))
    return mask


def peak_seeds(values: np.ndarray, count: int) -> np.ndarray:
    """Flat indices of the best ``count`` local peaks, one seed per basin."""
    masked = np.where(local_peaks(values), values, -np.inf).ravel()
    idx = top_indices(masked, count)
    idx = idx[np.isfinite(masked[idx])]
    return idx if idx.size else top_indices(values.ravel(), 1)


def top_indices(values: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest values, ties broken by index."""
    if values.size <= count:
        return np.lexsort((np.arange(values.size), -values))
    kth = np.partition(values, values.size - count)[values.size - count]
    cand = np.flatnonzero(values >= kth)
    return cand[np.lexsort((cand, -values[cand]))][:count]


# -- golden-section search, vectorized over independent brackets -------------


def golden_max(f, a, b, tol: float, max_iter: int = 200):
    """Maximize ``f`` on each bracket ``[a_i, b_i]`` simultaneously.

    ``f`` maps an array of abscissae to an array of values.  Returns the
    best abscissae and values found (interior probes and both ends).
    """
    a = np.asarray(a, dtype=float).copy()
    b = np.asarray(b, dtype=float).copy()
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if np.all(np.abs(b - a) <= tol):
            break
        left = fc >= fd
        # keep [a, d] where the left probe wins, [c, b] otherwise
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INV_PHI * (b - a)
        new_d = a + INV_PHI * (b - a)
        probe = np.where(left, new_c, new_d)
        fp = f(probe)
        c, d, fc, fd = (
            np.where(left, new_c, d),
            np.where(left, c, new_d),
            np.where(left, fp, fd),
            np.where(left, fc, fp),
        )
    xs = np.stack([a, b, c, d])
    fs = np.stack([f(a), f(b), fc, fd])
    k = np.argmax(fs, axis=0)
    idx = np.arange(xs.shape[1])
    return xs[k, idx], fs[k, idx]


# -- integrands ----------------------------------------------------------------


def angle_integrand(x, y, Z):
    """``∠(x, z, y)`` for boundary points ``Z``."""
    return vector_angle(x - Z, y - Z)


def triangular_integrand(x, y, Z):
    dxy = float(np.linalg.norm(x - y))
    return dxy / (np.linalg.norm(Z - x, axis=-1) + np.linalg.norm(Z - y, axis=-1))


def ptolemaic_integrand(x, y, Z, W):
    """``σ(z, x, w, y)``; ``W is None`` stands for ``w = INF``."""
    dxy = float(np.linalg.norm(x - y))
    if W is None:
        return triangular_integrand(x, y, Z)
    num = np.linalg.norm(Z - W, axis=-1) * dxy
    den = (np.linalg.norm(Z - x, axis=-1) * np.linalg.norm(W - y, axis=-1)
           + np.linalg.norm(Z - y, axis=-1) * np.linalg.norm(W - x, axis=-1))
    return num / den


def _invert_about(P, W):
    d = P - W
    with np.errstate(divide="ignore", invalid="ignore"):
        return d / np.einsum("...i,...i->...", d, d)[..., None]


def double_angle_integrand(x, y, Z, W):
    """``arccos ½(|z,y,x,w| + |z,x,y,w| - s(z,x,y,w))``.

    Evaluated as the angle ``∠(f x, f z, f y)`` for the inversion ``f``
    about ``w`` (which sends ``w`` to INF); the two expressions agree by
    Möbius invariance of the absolute ratio and the angle form avoids the
    cancellation of the arccos argument.  ``W is None`` means ``w = INF``.
    """
    if W is None:
        return angle_integrand(x, y, Z)
    fz = _invert_about(Z, W)
    fx = _invert_about(x, W)
    fy = _invert_about(y, W)
    with np.errstate(invalid="ignore"):
        out = vector_angle(fx - fz, fy - fz)
    # z = w carries no information
    return np.where(np.all(Z == W, axis=-1), 0.0, out)


def double_angle_ratio_form(x, y, Z, W):
    """Direct absolute-ratio form of :func:`double_angle_integrand`, for checks."""
    if W is None:
        dz_x = np.linalg.norm(x - Z, axis=-1)
        dz_y = np.linalg.norm(y - Z, axis=-1)
        A = dz_x / dz_y
        S = float(np.linalg.norm(x - y)) ** 2 / (dz_x * dz_y)
    else:
        dxz = np.linalg.norm(x - Z, axis=-1)
        dyz = np.linalg.norm(y - Z, axis=-1)
        dxw = np.linalg.norm(x - W, axis=-1)
        dyw = np.linalg.norm(y - W, axis=-1)
        A = dxz * dyw / (dyz * dxw)
        S = float(np.linalg.norm(x - y)) ** 2 * np.linalg.norm(Z - W, axis=-1) ** 2 / (dxz * dxw * dyz * dyw)
    return np.arccos(np.clip(0.5 * (A + 1.0 / A - S), -1.0, 1.0))


# -- one-point suprema ---------------------------------------------------------


def _prepare(sampler: BoundarySampler, x, y):
    d = sampler.domain
    x = as_point(x, d.n)
    y = as_point(y, d.n)
    d.check(x)
    d.check(y)
    return x, y


def _one_point_sup(sampler: BoundarySampler, x, y, integrand) -> float:
    plan = sampler.samples(x, y, sampler.coarse_count)
    vals = integrand(x, y, plan.points(plan.owners, plan.params))
    seeds = peak_seeds(vals, sampler.seeds)
    own = plan.owners[seeds]
    lo, hi = plan.bracket(own, plan.params[seeds], plan.spacings[seeds])
    _, refined = golden_max(lambda t: integrand(x, y, plan.points(own, t)), lo, hi,
                            sampler.refine_tolerance)
    return float(max(vals.max(), refined.max()))


def _result(sampler, value, metric):
    return MetricValue(value, metric, method="sup_sampling",
                       pseudometric_warning=sampler.domain.pseudometric)


def v_sup(sampler: BoundarySampler, x, y) -> MetricValue:
    """Visual angle metric as the supremum of ``∠(x, z, y)`` over ``z ∈ ∂G``.

    Returns pi when the open segment ``(x, y)`` meets the boundary.
    """
    x, y = _prepare(sampler, x, y)
    if np.array_equal(x, y):
        return _result(sampler, 0.0, "v")
    d = sampler.domain
    if isinstance(d, PuncturedSpace):
        return _result(sampler, vector_angle(x, y), "v")
    if isinstance(d, Generic2D) and d.meets_open_segment(x, y):
        return _result(sampler, math.pi, "v")
    return _result(sampler, _one_point_sup(sampler, x, y, angle_integrand), "v")


def s_triangular(sampler: BoundarySampler, x, y) -> MetricValue:
    """Triangular ratio metric ``sup |x-y| / (|z-x| + |z-y|)``."""
    x, y = _prepare(sampler, x, y)
    if np.array_equal(x, y):
        return _result(sampler, 0.0, "s")
    d = sampler.domain
    if isinstance(d, PuncturedSpace):
        return _result(sampler, triangular_integrand(x, y, np.zeros((1, d.n)))[0], "s")
    if isinstance(d, Generic2D) and d.meets_open_segment(x, y):
        return _result(sampler, 1.0, "s")
    return _result(sampler, _one_point_sup(sampler, x, y, triangular_integrand), "s")


# -- two-point suprema ---------------------------------------------------------


def _pair_sup(sampler: BoundarySampler, x, y, integrand) -> float:
    plan = sampler.samples(x, y, sampler.pair_count)
    P = plan.points(plan.owners, plan.params)
    M = P.shape[0]
    tol = sampler.refine_tolerance

    grid = integrand(x, y, P[:, None, :], P[None, :, :])
    np.fill_diagonal(grid, -np.inf)
    best = float(grid.max())

    # both integrands are symmetric in the two boundary points
    seeds = peak_seeds(np.where(np.triu(np.ones((M, M), bool), 1), grid, -np.inf), sampler.seeds)
    i, j = np.divmod(seeds, M)
    oi = plan.owners[i][:, None]
    oj = plan.owners[j][:, None]

    def f(ti, tj):
        ti = plan.clip(oi, ti)
        tj = plan.clip(oj, tj)
        return integrand(x, y, plan.points(np.broadcast_to(oi, ti.shape), ti),
                         plan.points(np.broadcast_to(oj, tj.shape), tj))

    _, _, refined = zoom_max_2d(f, plan.params[i], plan.params[j], plan.spacings[i],
                                plan.spacings[j], tol)
    best = max(best, float(refined.max()))

    if sampler.include_infinity:
        col = integrand(x, y, P, None)
        best = max(best, float(col.max()))
        seeds = peak_seeds(col, sampler.seeds)
        own = plan.owners[seeds]
        lo, hi = plan.bracket(own, plan.params[seeds], plan.spacings[seeds])
        _, refined = golden_max(lambda t: integrand(x, y, plan.points(own, t), None), lo, hi, tol)
        best = max(best, float(refined.max()))
    return best


def r_ptolemaic(sampler: BoundarySampler, x, y) -> MetricValue:
    """Ptolemaic angular metric ``sup σ(z, x, w, y)`` over boundary pairs."""
    x, y = _prepare(sampler, x, y)
    if np.array_equal(x, y):
        return _result(sampler, 0.0, "r")
    d = sampler.domain
    if isinstance(d, PuncturedSpace):
        return _result(sampler, triangular_integrand(x, y, np.zeros((1, d.n)))[0], "r")
    return _result(sampler, _pair_sup(sampler, x, y, ptolemaic_integrand), "r")


def v_double(sampler: BoundarySampler, x, y) -> MetricValue:
    """Visual double angle metric, the Möbius invariant two-point version of ``v``."""
    x, y = _prepare(sampler, x, y)
    if np.array_equal(x, y):
        return _result(sampler, 0.0, "vbar")
    d = sampler.domain
    if isinstance(d, PuncturedSpace):
        # pairs (0, INF) and (INF, 0) both see the angle at the origin
        return _result(sampler, vector_angle(x, y), "vbar")
    return _result(sampler, _pair_sup(sampler, x, y, double_angle_integrand), "vbar")


def starred(value: MetricValue) -> MetricValue:
    """``sin(v/2)`` for a value of ``v`` or ``vbar``."""
    kinds = {"v": "v_star", "vbar": "vbar_star"}
    metric = getattr(value, "metric", None)
    if metric not in kinds:
        raise KindMismatch(f"starred() needs a v or vbar value, got {metric!r}")
    return MetricValue(math.sin(0.5 * float(value)), kinds[metric], method=value.method,
                       pseudometric_warning=value.pseudometric_warning)
