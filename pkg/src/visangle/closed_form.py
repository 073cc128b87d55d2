"""Closed-form metrics in the unit ball, the upper half-space and the punctured space.

Scalar functions validate their arguments and return :class:`MetricValue`;
the ``*_many`` variants take ``(N, n)`` arrays, skip validation and return
plain float arrays.  The harness in :mod:`visangle.verify` leans on them.
"""

from __future__ import annotations

import math

import numpy as np

from .domains import Domain, HalfSpace, PuncturedSpace, UnitBall
from .errors import OutOfInterval, OutsideDomain, UnsupportedDomain
from .geometry import as_point, common_dim, vector_angle
from .moebius import ball_tangent_2d, inscribed_angle
from .values import MetricValue


def _ball_points(x, y):
    x, y = as_point(x), as_point(y)
    n = common_dim(x, y)
    UnitBall(n).check(x)
    UnitBall(n).check(y)
    return x, y


def _half_points(x, y):
    x, y = as_point(x), as_point(y)
    n = common_dim(x, y)
    HalfSpace(n).check(x)
    HalfSpace(n).check(y)
    return x, y


def _one_minus_sq(X):
    r = np.linalg.norm(X, axis=-1)
    return (1.0 - r) * (1.0 + r)


# -- hyperbolic metric -------------------------------------------------------


def ball_sinh_half_rho_many(X, Y):
    return np.linalg.norm(X - Y, axis=-1) / np.sqrt(_one_minus_sq(X) * _one_minus_sq(Y))


def half_sinh_half_rho_many(X, Y):
    # sh(rho/2)^2 = (ch rho - 1)/2 = |x-y|^2 / (4 x_n y_n)
    return np.linalg.norm(X - Y, axis=-1) / (2.0 * np.sqrt(X[..., -1] * Y[..., -1]))


def rho_ball_many(X, Y):
    return 2.0 * np.arcsinh(ball_sinh_half_rho_many(X, Y))


def rho_half_many(X, Y):
    return 2.0 * np.arcsinh(half_sinh_half_rho_many(X, Y))


def rho_ball(x, y) -> MetricValue:
    x, y = _ball_points(x, y)
    return MetricValue(rho_ball_many(x, y), "rho")


def rho_half(x, y) -> MetricValue:
    """Hyperbolic distance in the upper half-space.

    ``ch rho = 1 + |x-y|^2/(2 x_n y_n)`` is evaluated through
    ``rho = 2 arsh(|x-y| / (2 sqrt(x_n y_n)))`` to keep short distances
    accurate.
    """
    x, y = _half_points(x, y)
    return MetricValue(rho_half_many(x, y), "rho")


def _sinh_half_rho(domain, X, Y):
    if isinstance(domain, UnitBall):
        return ball_sinh_half_rho_many(X, Y)
    if isinstance(domain, HalfSpace):
        return half_sinh_half_rho_many(X, Y)
    raise UnsupportedDomain(f"no hyperbolic metric on {domain}")


def rho_star_many(domain, X, Y):
    return np.arctan(_sinh_half_rho(domain, X, Y))


def rho_star(domain: Domain, x, y) -> MetricValue:
    """``arctan(sh(rho/2))``, the Möbius invariant companion of ``v``."""
    if not isinstance(domain, (UnitBall, HalfSpace)):
        raise UnsupportedDomain(f"rho_star is defined on the ball and the half-space, not {domain}")
    x, y = as_point(x, domain.n), as_point(y, domain.n)
    domain.check(x)
    domain.check(y)
    return MetricValue(rho_star_many(domain, x, y), "rho_star")


# -- distance ratio and quasihyperbolic metrics ------------------------------


def _boundary_distance_many(domain, X):
    if isinstance(domain, UnitBall):
        return 1.0 - np.linalg.norm(X, axis=-1)
    if isinstance(domain, HalfSpace):
        return X[..., -1]
    if isinstance(domain, PuncturedSpace):
        return np.linalg.norm(X, axis=-1)
    X = np.atleast_2d(X)
    return np.array([domain.boundary_distance(p) for p in X])


def j_many(domain, X, Y):
    d = np.minimum(_boundary_distance_many(domain, X), _boundary_distance_many(domain, Y))
    return np.log1p(np.linalg.norm(X - Y, axis=-1) / d)


def j_metric(domain: Domain, x, y) -> MetricValue:
    """``log(1 + |x-y| / min(d(x, ∂G), d(y, ∂G)))``."""
    x, y = as_point(x, domain.n), as_point(y, domain.n)
    domain.check(x)
    domain.check(y)
    return MetricValue(float(np.squeeze(j_many(domain, x, y))), "j")


def _punctured_points(x, y):
    x, y = as_point(x), as_point(y)
    n = common_dim(x, y)
    PuncturedSpace(n).check(x)
    PuncturedSpace(n).check(y)
    return x, y


def v_punctured(x, y) -> MetricValue:
    """The angle at the origin; a pseudometric on ``R^n \\ {0}``."""
    x, y = _punctured_points(x, y)
    return MetricValue(vector_angle(x, y), "v", pseudometric_warning=True)


def k_punctured(x, y) -> MetricValue:
    """Quasihyperbolic distance of the punctured space.

    ``k = sqrt(∠(x,0,y)^2 + log^2(|y|/|x|))``.
    """
    x, y = _punctured_points(x, y)
    ang = vector_angle(x, y)
    lr = math.log(float(np.linalg.norm(y)) / float(np.linalg.norm(x)))
    return MetricValue(math.hypot(ang, lr), "k")


def k_metric(domain: Domain, x, y) -> MetricValue:
    if not isinstance(domain, PuncturedSpace):
        raise UnsupportedDomain(f"no closed-form quasihyperbolic metric on {domain}")
    return k_punctured(x, y)


# -- visual angle metric -----------------------------------------------------


def _reduce_to_plane(X, Y):
    """Rotate each pair into the plane so that the longer vector is on e1."""
    nx = np.linalg.norm(X, axis=-1)
    ny = np.linalg.norm(Y, axis=-1)
    swap = (ny > nx)[..., None]
    P = np.where(swap, Y, X)
    Q = np.where(swap, X, Y)
    npn = np.maximum(np.linalg.norm(P, axis=-1), 1e-300)
    e1 = P / npn[..., None]
    q1 = np.einsum("...i,...i->...", Q, e1)
    q2 = np.linalg.norm(Q - q1[..., None] * e1, axis=-1)
    p2 = np.stack([npn * (npn > 1e-300), np.zeros_like(npn)], axis=-1)
    return p2, np.stack([q1, q2], axis=-1)


def v_ball_many(X, Y):
    """Visual angle metric of the unit ball for arrays of point pairs."""
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if X.shape[-1] > 2:
        X, Y = _reduce_to_plane(X, Y)
    same = np.all(X == Y, axis=-1)
    # give coincident pairs a harmless partner; their value is reset below
    Yd = np.where(same[..., None], -X + np.array([0.0, 1e-3]), Y)
    m, u, t, _ = ball_tangent_2d(X, Yd)
    c = m + t[..., None] * u
    nc = np.linalg.norm(c, axis=-1)
    with np.errstate(invalid="ignore", divide="ignore"):
        tang = np.where((nc < 1e-15)[..., None], u, c / nc[..., None])
    half = 0.5 * np.linalg.norm(Yd - X, axis=-1)
    side = np.einsum("...i,...i->...", tang - m, u)
    v = inscribed_angle(half, t, side)
    return np.where(same, 0.0, v)


def v_ball(x, y) -> MetricValue:
    """Visual angle metric of the unit ball ``B^n``.

    The supremum over the sphere is attained at the tangency point of the
    circle through x and y internally tangent to the sphere; the angle is
    read off as an inscribed angle.  One point at 0 and equal norms are
    handled by explicit formulas.
    """
    x, y = _ball_points(x, y)
    if np.array_equal(x, y):
        return MetricValue(0.0, "v")
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if nx == 0.0 or ny == 0.0:
        return MetricValue(math.asin(max(nx, ny)), "v")
    if nx == ny:
        theta = 0.5 * vector_angle(x, y)
        denom = (1.0 - nx) + 2.0 * nx * math.sin(0.5 * theta) ** 2
        return MetricValue(2.0 * math.atan2(nx * math.sin(theta), denom), "v")
    return MetricValue(float(v_ball_many(x, y)), "v")


def v_half_many(X, Y):
    """Visual angle metric of the upper half-space for arrays of pairs.

    With ``h = |x' - y'|`` the horizontal separation, the value is
    ``atan2(2 sqrt(x_n y_n)|x-y| + h (x_n + y_n), 4 x_n y_n - h^2)``, an
    algebraically equivalent rewrite of the two-branch arccos formula that
    has no 0/0 when the heights agree.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    xn = X[..., -1]
    yn = Y[..., -1]
    h = np.linalg.norm(X[..., :-1] - Y[..., :-1], axis=-1)
    L = np.linalg.norm(X - Y, axis=-1)
    s = np.sqrt(xn * yn)
    return np.arctan2(2.0 * s * L + h * (xn + yn), 4.0 * xn * yn - h * h)


def v_half(x, y) -> MetricValue:
    x, y = _half_points(x, y)
    return MetricValue(float(v_half_many(x, y)), "v")


def v_closed(domain: Domain, x, y) -> MetricValue:
    if isinstance(domain, UnitBall):
        return v_ball(x, y)
    if isinstance(domain, HalfSpace):
        return v_half(x, y)
    if isinstance(domain, PuncturedSpace):
        return v_punctured(x, y)
    raise UnsupportedDomain(f"no closed form for v on {domain}")


def v_closed_many(domain, X, Y):
    if isinstance(domain, UnitBall):
        return v_ball_many(X, Y)
    if isinstance(domain, HalfSpace):
        return v_half_many(X, Y)
    raise UnsupportedDomain(f"no vectorized closed form for v on {domain}")


def ball_corollary_bound(x, y) -> float:
    """Upper bound ``2 arctan(|x-y|(2-|x-y|) / (2 sqrt((1-|x|^2)(1-|y|^2))))`` for ``v_B``."""
    x, y = _ball_points(x, y)
    d = float(np.linalg.norm(x - y))
    return 2.0 * math.atan(d * (2.0 - d) / (2.0 * math.sqrt(_one_minus_sq(x) * _one_minus_sq(y))))


# -- monotone special functions ----------------------------------------------


def _open(name, value, lo, hi):
    if not lo < value < hi:
        raise OutOfInterval(f"{name}={value} outside ({lo}, {hi})")


def lemma_function(name: str, *params) -> float:
    """The auxiliary functions ``f1``..``f4`` and ``f_theta``.

    ``f1(r)``, ``f2(r)``, ``f4(r)`` take one argument, ``f3(r, c)`` takes
    ``c`` in (0, 1) as well, and ``f_theta(alpha, theta)`` needs
    ``alpha`` in (0, pi) and ``theta`` in (0, pi - alpha).
    """
    if name == "f1":
        (r,) = params
        _open("r", r, 0.0, 1.0)
        return math.asin(r) / math.atanh(r)
    if name == "f2":
        (r,) = params
        _open("r", r, 0.0, 1.0)
        return math.asin(r) / -math.log1p(-r)
    if name == "f3":
        r, c = params
        _open("r", r, 0.0, 1.0)
        _open("c", c, 0.0, 1.0)
        return (math.atan(c * r / (1.0 - c * math.sqrt((1.0 - r) * (1.0 + r))))
                - math.asinh(2.0 * c * r / ((1.0 - c) * (1.0 + c))))
    if name == "f4":
        (r,) = params
        _open("r", r, 0.0, math.inf)
        # arch(1 + 2 r^2) = 2 arsh(r)
        return math.atan(r) / (2.0 * math.asinh(r))
    if name == "f_theta":
        alpha, theta = params
        _open("alpha", alpha, 0.0, math.pi)
        if not 0.0 <= theta < math.pi - alpha:
            raise OutOfInterval(f"theta={theta} outside [0, {math.pi - alpha})")
        return (1.0 + math.cos(alpha + theta)) * (1.0 + math.cos(alpha - theta))
    raise OutOfInterval(f"unknown lemma function {name!r}")
