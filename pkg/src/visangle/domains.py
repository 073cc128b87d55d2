"""Domain descriptions: the three canonical domains and generic planar ones.

Generic planar domains are given by their boundary, a list of closed or
open polylines and circles.  A point belongs to the domain when it is off
the boundary and the even-odd rule over the closed pieces says "inside";
``exterior=True`` flips that rule and makes the domain unbounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter, OnBoundary, OutsideDomain
from .geometry import as_point

# points closer than this to the boundary are rejected
BOUNDARY_EPS = 1e-12


class Domain:
    n: int

    def contains(self, p) -> bool:
        raise NotImplementedError

    def boundary_distance(self, p) -> float:
        raise NotImplementedError

    @property
    def unbounded(self) -> bool:
        return False

    @property
    def pseudometric(self) -> bool:
        """True when the boundary is a proper subset of a line."""
        return False

    def check(self, p) -> np.ndarray:
        """Return ``p`` as a point of this domain or raise."""
        p = as_point(p, self.n)
        if not self.contains(p):
            if self.boundary_distance(p) <= BOUNDARY_EPS:
                raise OnBoundary(f"{p.tolist()} lies on the boundary of {self}")
            raise OutsideDomain(f"{p.tolist()} is not in {self}")
        if self.boundary_distance(p) <= BOUNDARY_EPS:
            raise OnBoundary(f"{p.tolist()} is within {BOUNDARY_EPS} of the boundary of {self}")
        return p


def _check_n(n: int) -> None:
    if int(n) != n or n < 2:
        raise InvalidParameter(f"dimension must be an integer >= 2, got {n}")


@dataclass(frozen=True)
class UnitBall(Domain):
    n: int = 2

    def __post_init__(self):
        _check_n(self.n)

    def contains(self, p) -> bool:
        return float(np.linalg.norm(p)) < 1.0

    def boundary_distance(self, p) -> float:
        return abs(1.0 - float(np.linalg.norm(p)))


@dataclass(frozen=True)
class HalfSpace(Domain):
    """Upper half-space ``{x : x_n > 0}``."""

    n: int = 2

    def __post_init__(self):
        _check_n(self.n)

    def contains(self, p) -> bool:
        return float(p[-1]) > 0.0

    def boundary_distance(self, p) -> float:
        return abs(float(p[-1]))

    @property
    def unbounded(self) -> bool:
        return True


@dataclass(frozen=True)
class PuncturedSpace(Domain):
    """``R^n`` minus the origin; its boundary is ``{0, INF}``."""

    n: int = 2

    def __post_init__(self):
        _check_n(self.n)

    def contains(self, p) -> bool:
        return bool(np.any(np.asarray(p) != 0.0))

    def boundary_distance(self, p) -> float:
        return float(np.linalg.norm(p))

    @property
    def unbounded(self) -> bool:
        return True

    @property
    def pseudometric(self) -> bool:
        return True


# -- boundary pieces for planar domains --------------------------------------


@dataclass(frozen=True, eq=False)
class Polyline:
    vertices: np.ndarray
    closed: bool = True

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 2:
            raise InvalidParameter("a polyline needs >= 2 planar vertices")
        if not np.all(np.isfinite(v)):
            raise InvalidParameter("non-finite polyline vertex")
        if self.closed and len(v) < 3:
            raise InvalidParameter("a closed polyline needs >= 3 vertices")
        object.__setattr__(self, "vertices", v)
        a, b = self._segments()
        seg_len = np.linalg.norm(b - a, axis=1)
        if np.any(seg_len == 0.0):
            raise InvalidParameter("repeated consecutive polyline vertex")
        object.__setattr__(self, "_cum", np.concatenate([[0.0], np.cumsum(seg_len)]))

    def _segments(self):
        v = self.vertices
        if self.closed:
            return v, np.roll(v, -1, axis=0)
        return v[:-1], v[1:]

    @property
    def length(self) -> float:
        return float(self._cum[-1])

    @property
    def periodic(self) -> bool:
        return self.closed

    def point_at(self, s):
        """Points at arclength parameter ``s`` (array or scalar)."""
        s = np.asarray(s, dtype=float)
        L = self.length
        if self.closed:
            s = np.mod(s, L)
        else:
            s = np.clip(s, 0.0, L)
        a, b = self._segments()
        i = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(a) - 1)
        seg = self._cum[i + 1] - self._cum[i]
        t = ((s - self._cum[i]) / seg)[..., None]
        return a[i] * (1.0 - t) + b[i] * t

    def nearest_param(self, p) -> float:
        a, b = self._segments()
        d = b - a
        t = np.clip(np.einsum("ij,ij->i", p - a, d) / np.einsum("ij,ij->i", d, d), 0.0, 1.0)
        q = a + t[:, None] * d
        k = int(np.argmin(np.linalg.norm(q - p, axis=1)))
        return float(self._cum[k] + t[k] * (self._cum[k + 1] - self._cum[k]))

    def distance(self, p) -> float:
        return float(np.linalg.norm(self.point_at(self.nearest_param(p)) - p))

    def crossings(self, p) -> int:
        """Number of edges crossed by the ray from ``p`` in the +x direction."""
        if not self.closed:
            return 0
        a, b = self._segments()
        straddle = (a[:, 1] > p[1]) != (b[:, 1] > p[1])
        with np.errstate(divide="ignore", invalid="ignore"):
            xi = a[:, 0] + (p[1] - a[:, 1]) * (b[:, 0] - a[:, 0]) / (b[:, 1] - a[:, 1])
        return int(np.count_nonzero(straddle & (xi > p[0])))

    def meets_open_segment(self, x, y) -> bool:
        a, b = self._segments()
        r = y - x
        s = b - a
        denom = r[0] * s[:, 1] - r[1] * s[:, 0]
        qp = a - x
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (qp[:, 0] * s[:, 1] - qp[:, 1] * s[:, 0]) / denom
            u = (qp[:, 0] * r[1] - qp[:, 1] * r[0]) / denom
        hit = (denom != 0.0) & (t > 0.0) & (t < 1.0) & (u >= 0.0) & (u <= 1.0)
        return bool(np.any(hit))

    def collinear_with(self, points: list) -> bool:
        pts = np.vstack([self.vertices, *points]) if points else self.vertices
        c = pts - pts[0]
        return bool(np.linalg.matrix_rank(c, tol=1e-12 * max(1.0, np.abs(c).max())) <= 1)


def Polygon(vertices) -> Polyline:
    return Polyline(vertices, closed=True)


@dataclass(frozen=True, eq=False)
class Circle:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center, 2))
        if not self.radius > 0.0:
            raise InvalidParameter("circle radius must be positive")

    @property
    def length(self) -> float:
        return 2.0 * math.pi * self.radius

    periodic = True

    def point_at(self, s):
        phi = np.asarray(s, dtype=float) / self.radius
        return self.center + self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def nearest_param(self, p) -> float:
        d = p - self.center
        return self.radius * (math.atan2(d[1], d[0]) % (2.0 * math.pi))

    def distance(self, p) -> float:
        return abs(float(np.linalg.norm(p - self.center)) - self.radius)

    def crossings(self, p) -> int:
        return int(float(np.linalg.norm(p - self.center)) < self.radius)

    def meets_open_segment(self, x, y) -> bool:
        d = y - x
        f = x - self.center
        A = float(d @ d)
        B = 2.0 * float(f @ d)
        C = float(f @ f) - self.radius**2
        disc = B * B - 4.0 * A * C
        if disc < 0.0:
            return False
        sq = math.sqrt(disc)
        return any(0.0 < t < 1.0 for t in ((-B - sq) / (2 * A), (-B + sq) / (2 * A)))


@dataclass(frozen=True, eq=False)
class Generic2D(Domain):
    pieces: tuple
    exterior: bool = False
    n: int = field(default=2, init=False)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise InvalidParameter("a generic domain needs a nonempty boundary")
        for pc in pieces:
            if not isinstance(pc, (Polyline, Circle)):
                raise InvalidParameter(f"unknown boundary piece {pc!r}")
        if not self.exterior and not any(isinstance(pc, Circle) or pc.closed for pc in pieces):
            raise InvalidParameter("a bounded domain needs a closed boundary piece")
        object.__setattr__(self, "pieces", pieces)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        if self.boundary_distance(p) == 0.0:
            return False
        inside = sum(pc.crossings(p) for pc in self.pieces) % 2 == 1
        return inside != self.exterior

    def boundary_distance(self, p) -> float:
        p = np.asarray(p, dtype=float)
        return min(pc.distance(p) for pc in self.pieces)

    @property
    def unbounded(self) -> bool:
        return self.exterior

    @property
    def pseudometric(self) -> bool:
        if any(isinstance(pc, Circle) for pc in self.pieces):
            return False
        pts = np.vstack([pc.vertices for pc in self.pieces])
        c = pts - pts[0]
        return bool(np.linalg.matrix_rank(c, tol=1e-12 * max(1.0, np.abs(c).max())) <= 1)

    def meets_open_segment(self, x, y) -> bool:
        return any(pc.meets_open_segment(x, y) for pc in self.pieces)

    def __repr__(self) -> str:
        kinds = ", ".join(type(pc).__name__ for pc in self.pieces)
        return f"Generic2D([{kinds}], exterior={self.exterior})"
