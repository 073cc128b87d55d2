"""One entry point for every metric on every supported domain.

Closed forms are used where they exist; everything else goes through the
boundary sampler.
"""

from __future__ import annotations

from .closed_form import j_metric, k_metric, rho_ball, rho_half, rho_star, v_closed
from .domains import Domain, Generic2D, HalfSpace, UnitBall
from .errors import InvalidParameter, UnsupportedDomain
from .geometry import as_point
from .sup import BoundarySampler, r_ptolemaic, s_triangular, starred, v_double, v_sup
from .values import METRIC_IDS, MetricValue

_SAMPLED = {"s": s_triangular, "r": r_ptolemaic, "vbar": v_double}


def _sampler(domain, sampler):
    if sampler is not None:
        return sampler
    if domain.n != 2:
        raise UnsupportedDomain(f"sampled metrics need a planar domain, got n = {domain.n}")
    return BoundarySampler(domain)


def evaluate(metric: str, domain: Domain, x, y, sampler: BoundarySampler | None = None) -> MetricValue:
    """Evaluate ``metric`` (one of ``METRIC_IDS``) at ``x, y`` in ``domain``."""
    if metric not in METRIC_IDS:
        raise InvalidParameter(f"unknown metric {metric!r}; expected one of {', '.join(METRIC_IDS)}")
    x, y = as_point(x, domain.n), as_point(y, domain.n)
    if metric == "v":
        if isinstance(domain, Generic2D):
            return v_sup(_sampler(domain, sampler), x, y)
        return v_closed(domain, x, y)
    if metric in _SAMPLED:
        return _SAMPLED[metric](_sampler(domain, sampler), x, y)
    if metric == "v_star":
        return starred(evaluate("v", domain, x, y, sampler))
    if metric == "vbar_star":
        return starred(evaluate("vbar", domain, x, y, sampler))
    if metric == "j":
        return j_metric(domain, x, y)
    if metric == "k":
        return k_metric(domain, x, y)
    if metric == "rho_star":
        return rho_star(domain, x, y)
    # rho
    if isinstance(domain, UnitBall):
        return rho_ball(x, y)
    if isinstance(domain, HalfSpace):
        return rho_half(x, y)
    raise UnsupportedDomain(f"the hyperbolic metric is only available on the ball and half-space, not {domain}")

