"""Points of the extended space, angles, and the two envelope families.

A finite point is a 1-D float ``numpy`` array with at least two
coordinates.  The point at infinity is the singleton :data:`INF`; it is
never encoded as an array of IEEE infinities.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import (
    DegenerateVertex,
    DimensionMismatch,
    InternalConsistencyError,
    InvalidParameter,
)

# clamping an arccos argument further than this is a bug, not round-off
ARCCOS_SLACK = 1e-9
# relative tolerance used by the membership predicates
MEMBERSHIP_RTOL = 1e-12


class _Infinity:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(p) -> bool:
    return p is INF


def as_point(p, n: int | None = None) -> np.ndarray:
    """Validate ``p`` and return it as a finite float vector.

    Raises :class:`DimensionMismatch` when ``n`` is given and differs from
    the number of coordinates.
    """
    if p is INF:
        raise InvalidParameter("expected a finite point, got INF")
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size < 2:
        raise DimensionMismatch(f"a point needs >= 2 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter(f"non-finite coordinates in {arr!r}")
    if n is not None and arr.size != n:
        raise DimensionMismatch(f"expected dimension {n}, got {arr.size}")
    return arr


def as_extended(p, n: int | None = None):
    """Like :func:`as_point` but lets :data:`INF` through."""
    if p is INF:
        return INF
    return as_point(p, n)


def common_dim(*points) -> int:
    dims = {len(p) for p in points if p is not INF}
    if len(dims) > 1:
        raise DimensionMismatch(f"mixed dimensions {sorted(dims)}")
    return dims.pop() if dims else 0


def safe_arccos(c):
    """arccos with a clamp that refuses to hide more than round-off."""
    c = np.asarray(c, dtype=float)
    excess = np.max(np.abs(c)) - 1.0 if c.size else 0.0
    if excess > ARCCOS_SLACK:
        raise InternalConsistencyError(f"arccos argument off by {excess:.3e}")
    out = np.arccos(np.clip(c, -1.0, 1.0))
    return float(out) if out.ndim == 0 else out


def vector_angle(a, b):
    """Angle between vectors ``a`` and ``b`` along the last axis.

    Uses Kahan's ``2 atan2(|a|b| - b|a||, |a|b| + b|a||)`` form, which
    stays accurate for angles near 0 and near pi where arccos does not.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = np.linalg.norm(a, axis=-1, keepdims=True)
    nb = np.linalg.norm(b, axis=-1, keepdims=True)
    u = a * nb
    v = b * na
    out = 2.0 * np.arctan2(np.linalg.norm(u - v, axis=-1), np.linalg.norm(u + v, axis=-1))
    return float(out) if out.ndim == 0 else out


def angle_at(x, z, y) -> float:
    """The angle ``∠(x, z, y)`` in ``[0, pi]`` with vertex ``z``."""
    if x is INF or y is INF or z is INF:
        raise InvalidParameter("angle_at needs finite points")
    x, z, y = as_point(x), as_point(z), as_point(y)
    common_dim(x, z, y)
    if np.array_equal(x, z) or np.array_equal(y, z):
        raise DegenerateVertex("vertex coincides with an endpoint")
    return vector_angle(x - z, y - z)


def on_open_segment(w, x, y, rtol: float = MEMBERSHIP_RTOL) -> bool:
    d = y - x
    L2 = float(d @ d)
    if L2 == 0.0:
        return False
    t = float((w - x) @ d) / L2
    if not 0.0 < t < 1.0:
        return False
    return float(np.linalg.norm(w - (x + t * d))) <= rtol * math.sqrt(L2)


def in_envelope_E(x, y, alpha: float, w) -> bool:
    """Membership of ``w`` in the alpha-envelope ``{w : ∠(x,w,y) >= alpha}``."""
    x, y, w = as_point(x), as_point(y), as_point(w)
    common_dim(x, y, w)
    if np.array_equal(x, y):
        raise InvalidParameter("envelope needs x != y")
    if not 0.0 <= alpha <= math.pi:
        raise InvalidParameter(f"alpha={alpha} outside [0, pi]")
    if np.array_equal(w, x) or np.array_equal(w, y):
        raise DegenerateVertex("w coincides with a focus of the envelope")
    if alpha == 0.0:
        return True
    if on_open_segment(w, x, y):
        return True
    return vector_angle(x - w, y - w) >= alpha - MEMBERSHIP_RTOL


def in_envelope_F(x, y, c: float, z) -> bool:
    """Membership of ``z`` in the filled ellipsoid ``|x-z| + |y-z| <= c``."""
    x, y, z = as_point(x), as_point(y), as_point(z)
    common_dim(x, y, z)
    dxy = float(np.linalg.norm(x - y))
    if dxy == 0.0:
        raise InvalidParameter("envelope needs x != y")
    if c < dxy * (1.0 - MEMBERSHIP_RTOL):
        raise InvalidParameter(f"c={c} is shorter than |x-y|={dxy}")
    total = float(np.linalg.norm(x - z) + np.linalg.norm(y - z))
    return total <= c * (1.0 + MEMBERSHIP_RTOL)


def sample_envelope_E(x, y, alpha: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``count`` points of the alpha-envelope by construction.

    Each point lies on a circular arc over the chord ``[x, y]`` whose
    inscribed angle is drawn from ``[alpha, pi)``, inside a random 2-plane
    through the chord.  A tenth of the points are drawn from the segment.
    """
    x, y = as_point(x), as_point(y)
    n = common_dim(x, y)
    m = 0.5 * (x + y)
    half = 0.5 * float(np.linalg.norm(y - x))
    e = (y - x) / (2.0 * half)

    n_seg = count // 10
    n_arc = count - n_seg
    beta = rng.uniform(alpha, math.pi, size=n_arc)
    beta = np.clip(beta, 1e-12, math.pi - 1e-12)
    # random unit vector orthogonal to the chord
    g = rng.standard_normal((n_arc, n))
    g -= (g @ e)[:, None] * e
    u = g / np.linalg.norm(g, axis=1, keepdims=True)
    R = half / np.sin(beta)
    k = R * np.cos(beta)
    lo = beta - 0.5 * math.pi
    hi = 1.5 * math.pi - beta
    phi = rng.uniform(lo, hi)
    arc = (m + (R * np.cos(phi))[:, None] * e
           + (k + R * np.sin(phi))[:, None] * u)

    t = rng.uniform(0.0, 1.0, size=n_seg)
    seg = x + t[:, None] * (y - x)
    return np.vstack([arc, seg])


def envelope_inclusion_check(x, y, alpha: float, samples: int, seed: int = 0) -> bool:
    """Check that E_xy^alpha sits inside F_xy^c for ``c = |x-y| / sin(alpha/2)``.

    Probabilistic: returns True when no sampled point of the alpha-envelope
    falls outside the c-envelope.
    """
    x, y = as_point(x), as_point(y)
    if not 0.0 < alpha < math.pi:
        raise InvalidParameter(f"alpha={alpha} outside (0, pi)")
    rng = np.random.default_rng(seed)
    c = float(np.linalg.norm(x - y)) / math.sin(0.5 * alpha)
    for w in sample_envelope_E(x, y, alpha, samples, rng):
        if np.array_equal(w, x) or np.array_equal(w, y):
            continue
        if in_envelope_E(x, y, alpha, w) and not in_envelope_F(x, y, c, w):
            return False
    return True
