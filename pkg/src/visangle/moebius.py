"""Möbius transformations as compositions of reflections and inversions.

A :class:`MoebiusMap` is an ordered tuple of generators applied left to
right.  Every generator is an involution, so the inverse of a map is its
generator list reversed.  Besides the generic machinery this module holds
the chordal metric and the four-point invariants built from it, and the
tangent-circle constructions that realize the visual angle supremum in the
unit disk and the upper half-plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoincidentPoints,
    DegeneratePoints,
    DimensionMismatch,
    InvalidParameter,
    OutsideDomain,
)
from .geometry import INF, as_extended, as_point, common_dim


@dataclass(frozen=True, eq=False)
class HyperplaneReflection:
    """Reflection in ``P(a, t) = {x : x·a = t} ∪ {INF}``."""

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        a = as_point(self.normal)
        if not np.any(a):
            raise InvalidParameter("hyperplane normal must be nonzero")
        object.__setattr__(self, "normal", a)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.normal.size

    def __call__(self, p):
        if p is INF:
            return INF
        a = self.normal
        return p - 2.0 * (p @ a - self.offset) / (a @ a) * a

    def apply_array(self, P: np.ndarray) -> np.ndarray:
        a = self.normal
        return P - (2.0 * (P @ a - self.offset) / (a @ a))[:, None] * a


@dataclass(frozen=True, eq=False)
class SphereInversion:
    """Inversion in the sphere ``S(center, radius)``."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0.0:
            raise InvalidParameter("inversion radius must be positive")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def n(self) -> int:
        return self.center.size

    def __call__(self, p):
        if p is INF:
            return self.center.copy()
        d = p - self.center
        d2 = float(d @ d)
        if d2 == 0.0:
            return INF
        return self.center + (self.radius**2 / d2) * d

    def apply_array(self, P: np.ndarray) -> np.ndarray:
        d = P - self.center
        d2 = np.einsum("ij,ij->i", d, d)
        if np.any(d2 == 0.0):
            raise DegeneratePoints("array contains the inversion center")
        return self.center + (self.radius**2 / d2)[:, None] * d


class MoebiusMap:
    """Ordered composition of generators, applied left to right."""

    __slots__ = ("generators", "n")

    def __init__(self, generators=(), n: int = 2):
        generators = tuple(generators)
        for g in generators:
            if g.n != n:
                raise DimensionMismatch(f"generator of dimension {g.n} in a map of dimension {n}")
        self.generators = generators
        self.n = n

    def __call__(self, p):
        return self.apply(p)

    def apply(self, p):
        p = as_extended(p)
        if p is not INF and p.size != self.n:
            raise DimensionMismatch(f"point of dimension {p.size} for a map of dimension {self.n}")
        for g in self.generators:
            p = g(p)
        return p

    def apply_array(self, P) -> np.ndarray:
        """Vectorized action on an ``(N, n)`` array of finite points."""
        P = np.asarray(P, dtype=float)
        if P.ndim != 2 or P.shape[1] != self.n:
            raise DimensionMismatch(f"expected shape (N, {self.n}), got {P.shape}")
        for g in self.generators:
            P = g.apply_array(P)
        return P

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(reversed(self.generators), self.n)

    def then(self, other: "MoebiusMap") -> "MoebiusMap":
        """The map ``other ∘ self``."""
        if other.n != self.n:
            raise DimensionMismatch("composing maps of different dimensions")
        return MoebiusMap(self.generators + other.generators, self.n)

    def __len__(self) -> int:
        return len(self.generators)

    def __repr__(self) -> str:
        names = ", ".join(type(g).__name__ for g in self.generators)
        return f"MoebiusMap(n={self.n}, [{names}])"


def identity(n: int = 2) -> MoebiusMap:
    return MoebiusMap((), n)


def translation(v) -> MoebiusMap:
    """``x ↦ x + v`` as two parallel reflections."""
    v = as_point(v)
    if not np.any(v):
        return identity(v.size)
    # unit normal, so tiny shifts do not underflow in |v|^2
    u = v / np.max(np.abs(v))
    u /= np.linalg.norm(u)
    length = float(v @ u)
    return MoebiusMap(
        [HyperplaneReflection(u, 0.0), HyperplaneReflection(u, 0.5 * length)], v.size
    )


def dilation(factor: float, n: int = 2) -> MoebiusMap:
    """``x ↦ factor * x`` (factor > 0) as two concentric inversions."""
    if not factor > 0.0:
        raise InvalidParameter("dilation factor must be positive")
    if factor == 1.0:
        return identity(n)
    zero = np.zeros(n)
    return MoebiusMap([SphereInversion(zero, 1.0), SphereInversion(zero, math.sqrt(factor))], n)


def rotation_2d(angle: float) -> MoebiusMap:
    """Rotation of the plane about 0 as two reflections through the origin."""
    if angle == 0.0:
        return identity(2)
    half = 0.5 * angle
    # reflect in the line at angle 0, then in the line at angle half
    return MoebiusMap(
        [
            HyperplaneReflection([0.0, 1.0], 0.0),
            HyperplaneReflection([-math.sin(half), math.cos(half)], 0.0),
        ],
        2,
    )


def canonical_T_a(a) -> MoebiusMap:
    """The ball automorphism ``T_a = p_a ∘ σ_a`` sending ``a`` to 0.

    ``σ_a`` is the inversion in the sphere centered at ``a/|a|^2`` with
    radius ``sqrt(|a|^-2 - 1)`` (orthogonal to the unit sphere), and
    ``p_a`` is the reflection in the hyperplane through 0 orthogonal to
    ``a``.  ``T_0`` is the identity.
    """
    a = as_point(a)
    a2 = float(a @ a)
    if a2 >= 1.0:
        raise InvalidParameter(f"|a| = {math.sqrt(a2)} must be < 1")
    if a2 == 0.0:
        return identity(a.size)
    star = a / a2
    r = math.sqrt((1.0 - a2) / a2)
    return MoebiusMap([SphereInversion(star, r), HyperplaneReflection(a, 0.0)], a.size)


def cayley_half_to_ball() -> MoebiusMap:
    """``z ↦ (z - i)/(z + i)`` from the upper half-plane onto the unit disk.

    Realized as the inversion in the circle of radius sqrt(2) about ``-i``
    followed by the reflection in the line ``y = -x``.
    """
    return MoebiusMap(
        [SphereInversion([0.0, -1.0], math.sqrt(2.0)), HyperplaneReflection([1.0, 1.0], 0.0)], 2
    )


def real_fractional(a: float, b: float, c: float, d: float) -> MoebiusMap:
    """``z ↦ (a z + b)/(c z + d)`` with real coefficients and ``ad - bc > 0``.

    Such a map carries the upper half-plane onto itself.
    """
    det = a * d - b * c
    if not det > 0.0:
        raise InvalidParameter(f"ad - bc = {det} must be positive")
    if c == 0.0:
        return dilation(a / d).then(translation([b / d, 0.0]))
    if abs(c) < abs(d):
        # translating by d/c would cancel catastrophically; factor the
        # matrix as K U with U upper triangular (affine) and K the rotation
        # about i by atan2(c, a), which is a disk rotation under Cayley
        r2 = a * a + c * c
        affine = dilation(r2 / det).then(translation([(a * b + c * d) / det, 0.0]))
        cay = cayley_half_to_ball()
        return affine.then(cay).then(rotation_2d(-2.0 * math.atan2(c, a))).then(cay.inverse())
    # (az+b)/(cz+d) = a/c - det / (c^2 (z + d/c)); -1/w is an inversion
    # in the unit circle followed by the reflection x1 -> -x1
    neg_recip = MoebiusMap(
        [SphereInversion([0.0, 0.0], 1.0), HyperplaneReflection([1.0, 0.0], 0.0)], 2
    )
    return (
        translation([d / c, 0.0])
        .then(neg_recip)
        .then(dilation(det / (c * c)))
        .then(translation([a / c, 0.0]))
    )


# -- chordal metric and four-point invariants ---------------------------------


def chordal(x, y) -> float:
    x, y = as_extended(x), as_extended(y)
    if x is INF and y is INF:
        return 0.0
    if x is INF:
        x, y = y, x
    if y is INF:
        return 1.0 / math.sqrt(1.0 + float(x @ x))
    common_dim(x, y)
    return float(np.linalg.norm(x - y)) / math.sqrt((1.0 + float(x @ x)) * (1.0 + float(y @ y)))


def _same(p, q) -> bool:
    if p is INF or q is INF:
        return p is q
    return bool(np.array_equal(p, q))


def _check_distinct(*pts) -> None:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if _same(pts[i], pts[j]):
                raise DegeneratePoints("points of a quadruple must be pairwise distinct")


def absolute_ratio(a, b, c, d) -> float:
    """``|a,b,c,d| = q(a,c) q(b,d) / (q(a,b) q(c,d))``."""
    pts = [as_extended(p) for p in (a, b, c, d)]
    common_dim(*pts)
    _check_distinct(*pts)
    a, b, c, d = pts
    return chordal(a, c) * chordal(b, d) / (chordal(a, b) * chordal(c, d))


def symmetric_ratio(a, b, c, d) -> float:
    """``s(a,b,c,d) = |a,b,d,c| |a,c,d,b|``."""
    return absolute_ratio(a, b, d, c) * absolute_ratio(a, c, d, b)


def _dist_or_one(p, q) -> float:
    # a distance to INF cancels between numerator and denominator
    if p is INF or q is INF:
        return 1.0
    return float(np.linalg.norm(p - q))


def angular_characteristic(a, b, c, d) -> float:
    """``σ(a,b,c,d) = |a-c||b-d| / (|a-b||c-d| + |a-d||b-c|)``."""
    pts = [as_extended(p) for p in (a, b, c, d)]
    common_dim(*pts)
    if sum(p is INF for p in pts) > 1:
        raise DegeneratePoints("at most one point may be INF")
    a, b, c, d = pts
    den = _dist_or_one(a, b) * _dist_or_one(c, d) + _dist_or_one(a, d) * _dist_or_one(b, c)
    if den == 0.0:
        raise DegeneratePoints("angular characteristic has a zero denominator")
    return _dist_or_one(a, c) * _dist_or_one(b, d) / den


# -- tangent circles -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TangentCircle:
    center: np.ndarray
    radius: float
    tangency: np.ndarray


def _stable_quadratic(a, b_half, c):
    """Roots of ``a t^2 + 2 b_half t + c = 0`` (a > 0), cancellation-free."""
    disc = np.maximum(b_half * b_half - a * c, 0.0)
    q = -(b_half + np.copysign(np.sqrt(disc), b_half))
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = q / a
        r2 = np.where(q != 0.0, c / q, 0.0)
    return r1, r2


def ball_tangent_2d(x, y):
    """Both circles through planar ``x, y`` internally tangent to the unit circle.

    Works on arrays of shape ``(..., 2)``.  Centers lie on the perpendicular
    bisector ``m + t u`` of ``[x, y]``; substituting into
    ``|x - z| + |z| = 1`` gives a quadratic in ``t``.

    Returns ``(m, u, t_big, t_small)`` where ``t_big`` is the parameter of
    the center with the larger norm (ties broken by larger second, then
    first, coordinate).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = 0.5 * (x + y)
    dv = y - x
    L = np.linalg.norm(dv, axis=-1, keepdims=True)
    u = np.stack([-dv[..., 1], dv[..., 0]], axis=-1) / L
    # with Ap = (1 - x.y)/2 and h = |x-y|/2 the quadratic reads
    # (1 - B^2) t^2 + 2 B Ap t + (h^2 - Ap^2) = 0; every coefficient is
    # formed from small quantities so points near the circle keep accuracy
    h = 0.5 * L[..., 0]

    def gap(p):
        r = np.linalg.norm(p, axis=-1)
        return (1.0 - r) * (1.0 + r)

    Ap = 0.25 * (gap(x) + gap(y) + L[..., 0] ** 2)
    B = np.einsum("...i,...i->...", x, u)
    qa = (1.0 - np.abs(B)) * (1.0 + np.abs(B))
    qb = B * Ap
    qc = (h - Ap) * (h + Ap)
    t1, t2 = _stable_quadratic(qa, qb, qc)
    z1 = m + t1[..., None] * u
    z2 = m + t2[..., None] * u
    n1 = np.linalg.norm(z1, axis=-1)
    n2 = np.linalg.norm(z2, axis=-1)
    tie = np.abs(n1 - n2) <= 1e-14 * np.maximum(n1, 1.0)
    second = np.where(z1[..., 1] != z2[..., 1], z1[..., 1] > z2[..., 1], z1[..., 0] >= z2[..., 0])
    pick1 = np.where(tie, second, n1 > n2)
    t_big = np.where(pick1, t1, t2)
    t_small = np.where(pick1, t2, t1)
    return m, u, t_big, t_small


def inscribed_angle(half_chord, center_offset, tangency_offset):
    """Inscribed angle over a chord seen from a point of the circle.

    ``center_offset`` and ``tangency_offset`` are the signed distances of
    the center and the viewing point from the chord's line.  The view from
    the arc on the center's side is half the central angle, from the other
    arc its supplement.
    """
    half_angle = np.arctan2(half_chord, np.abs(center_offset))
    same_side = center_offset * tangency_offset >= 0.0
    return np.where(same_side, half_angle, math.pi - half_angle)


def _planar_frame(x: np.ndarray, y: np.ndarray):
    """Orthonormal pair spanning a 2-plane through 0, x and y."""
    p = x if np.linalg.norm(x) >= np.linalg.norm(y) else y
    q = y if p is x else x
    e1 = p / np.linalg.norm(p)
    w = q - (q @ e1) * e1
    nw = np.linalg.norm(w)
    if nw <= 1e-14 * max(np.linalg.norm(q), 1e-300):
        # 0, x, y collinear: any plane containing the line will do
        k = int(np.argmin(np.abs(e1)))
        w = np.zeros_like(e1)
        w[k] = 1.0
        w -= (w @ e1) * e1
        nw = np.linalg.norm(w)
    return e1, w / nw


def tangent_circle_ball(x, y) -> TangentCircle:
    """The tangent circle through ``x, y`` whose tangency realizes ``v_B``."""
    x, y = as_point(x), as_point(y)
    n = common_dim(x, y)
    for p in (x, y):
        if not float(p @ p) < 1.0:
            raise OutsideDomain(f"{p.tolist()} is not in the open unit ball")
    if np.array_equal(x, y):
        raise CoincidentPoints("x and y coincide")
    if n == 2:
        e1, e2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        xp, yp = x, y
    else:
        e1, e2 = _planar_frame(x, y)
        xp = np.array([x @ e1, x @ e2])
        yp = np.array([y @ e1, y @ e2])
    m, u, t, _ = ball_tangent_2d(xp, yp)
    c = m + t * u
    nc = float(np.linalg.norm(c))
    if nc < 1e-15:
        tang = u.copy()
    else:
        tang = c / nc
    center = c[0] * e1 + c[1] * e2
    tangency = tang[0] * e1 + tang[1] * e2
    return TangentCircle(center, 1.0 - nc, tangency)


def half_tangent_abscissae(x, y):
    """Abscissae of the tangency points of circles through ``x, y`` tangent to the real axis.

    ``x`` and ``y`` are planar points with positive second coordinate,
    arrays of shape ``(..., 2)`` allowed.  When ``x_2 = y_2`` the second
    root is absent and returned as NaN.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    y1, y2 = y[..., 0], y[..., 1]
    L = np.hypot(x1 - y1, x2 - y2)
    a = y2 - x2
    b = x1 * y2 - x2 * y1
    s = np.sqrt(x2 * y2) * L
    # (y2 - x2) c^2 - 2 b c + k = 0 with discriminant x2 y2 |x - y|^2
    q = b + np.where(b >= 0.0, s, -s)
    k = y2 * x1**2 - x2 * y1**2 - x2 * y2 * a
    with np.errstate(divide="ignore", invalid="ignore"):
        r1 = np.where(q != 0.0, k / q, 0.5 * (x1 + y1))
        r2 = np.where(a != 0.0, q / a, np.nan)
    return r1, r2


def tangent_circle_half(x, y) -> tuple:
    """Circles through ``x, y`` in the upper half-plane tangent to its boundary.

    Two circles when ``x_2 != y_2``, one when the heights agree.
    """
    x, y = as_point(x, 2), as_point(y, 2)
    if not (x[1] > 0.0 and y[1] > 0.0):
        raise OutsideDomain("points must lie in the upper half-plane")
    if np.array_equal(x, y):
        raise CoincidentPoints("x and y coincide")
    out = []
    for c1 in half_tangent_abscissae(x, y):
        c1 = float(c1)
        if math.isnan(c1):
            continue
        r = ((x[0] - c1) ** 2 + x[1] ** 2) / (2.0 * x[1])
        out.append(TangentCircle(np.array([c1, r]), r, np.array([c1, 0.0])))
    return tuple(out)
