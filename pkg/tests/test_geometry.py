import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from visangle.domains import Circle, Generic2D, HalfSpace, Polygon, Polyline, PuncturedSpace, UnitBall
from visangle.errors import (
    DegenerateVertex,
    DimensionMismatch,
    InternalConsistencyError,
    InvalidParameter,
    OnBoundary,
    OutsideDomain,
)
from visangle.geometry import (
    INF,
    angle_at,
    as_extended,
    envelope_inclusion_check,
    in_envelope_E,
    in_envelope_F,
    safe_arccos,
    vector_angle,
)

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
O = np.zeros(2)

coord = st.floats(-10, 10, allow_nan=False)
point = st.tuples(coord, coord).map(np.array)


def _arccos_angle(x, z, y):
    a, b = x - z, y - z
    return math.acos(max(-1.0, min(1.0, float(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b)))))


# -- angle_at --------------------------------------------------------------------


def test_angle_examples():
    assert angle_at(E1, O, E2) == pytest.approx(math.pi / 2, abs=1e-15)
    assert angle_at(E1, O, -E1) == pytest.approx(math.pi, abs=1e-15)
    assert angle_at([1, 0], [0, 0], [1, 1]) == pytest.approx(math.pi / 4, abs=1e-15)


def test_angle_rejects_vertex_on_endpoint_and_inf():
    with pytest.raises(DegenerateVertex):
        angle_at(E1, E1, E2)
    with pytest.raises(InvalidParameter):
        angle_at(INF, O, E2)
    with pytest.raises(DimensionMismatch):
        angle_at([1, 0, 0], O, E2)


@given(point, point, point)
def test_angle_matches_arccos_and_is_symmetric(x, z, y):
    if min(np.linalg.norm(x - z), np.linalg.norm(y - z)) < 1e-3:
        return
    a = angle_at(x, z, y)
    assert 0.0 <= a <= math.pi
    assert a == angle_at(y, z, x)
    assert a == pytest.approx(_arccos_angle(x, z, y), abs=1e-6)


@given(point, point, point, st.floats(0.01, 100), st.floats(0, 2 * math.pi), point)
def test_angle_similarity_invariant(x, z, y, lam, phi, t):
    if min(np.linalg.norm(x - z), np.linalg.norm(y - z)) < 1e-2:
        return
    R = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    f = lambda p: lam * R @ p + t
    assert angle_at(f(x), f(z), f(y)) == pytest.approx(angle_at(x, z, y), abs=1e-12 * 1e3)


def test_vector_angle_accurate_near_zero_and_pi():
    eps = 1e-9
    assert vector_angle(E1, [1.0, eps]) == pytest.approx(eps, rel=1e-6)
    assert vector_angle(E1, [-1.0, eps]) == pytest.approx(math.pi - eps, abs=1e-15)


def test_safe_arccos_clamps_roundoff_only():
    assert safe_arccos(1.0 + 1e-12) == 0.0
    with pytest.raises(InternalConsistencyError):
        safe_arccos(1.0 + 1e-6)


def test_inf_is_a_singleton_not_ieee():
    assert as_extended(INF) is INF
    with pytest.raises(InvalidParameter):
        as_extended([math.inf, 0.0])


# -- envelopes -------------------------------------------------------------------


def test_envelope_E_examples():
    assert in_envelope_E(-E1, E1, math.pi / 2, E2)
    assert in_envelope_E(-E1, E1, math.pi, O)
    assert not in_envelope_E(-E1, E1, math.pi / 2, 2 * E2)
    # direct arccos cross-check of the last one
    assert _arccos_angle(-E1, 2 * E2, E1) < math.pi / 2


def test_envelope_F_examples():
    assert in_envelope_F(-E1, E1, 2.0, O)
    assert not in_envelope_F(-E1, E1, 2.0, E2)
    assert in_envelope_F(-E1, E1, 4.0, E2)


@given(st.floats(0.05, math.pi - 0.05), st.floats(0.01, 0.99), point, point)
def test_envelope_E_on_constructed_arc(alpha, frac, x, y):
    """Points with ∠(x,w,y) = α exactly are in E at α and out at α + 1e-6."""
    half = 0.5 * np.linalg.norm(y - x)
    if half < 1e-2:
        return
    m = 0.5 * (x + y)
    e = (y - x) / (2 * half)
    u = np.array([-e[1], e[0]])
    R = half / math.sin(alpha)
    c = m + R * math.cos(alpha) * u
    # the major arc on the +u side sees the chord under α
    lo = -0.5 * math.pi + alpha
    hi = 1.5 * math.pi - alpha
    phi = lo + frac * (hi - lo)
    w = c + R * (math.cos(phi) * e + math.sin(phi) * u)
    assert angle_at(x, w, y) == pytest.approx(alpha, abs=1e-9)
    assert in_envelope_E(x, y, alpha, w)
    assert not in_envelope_E(x, y, alpha + 1e-6, w)


@given(point, point, point, st.floats(0.0, math.pi), st.floats(0.0, math.pi))
def test_envelope_E_monotone_in_alpha(x, y, w, a1, a2):
    if np.linalg.norm(x - y) < 1e-3 or min(np.linalg.norm(w - x), np.linalg.norm(w - y)) < 1e-3:
        return
    lo, hi = sorted((a1, a2))
    if in_envelope_E(x, y, hi, w):
        assert in_envelope_E(x, y, lo, w)


def test_envelope_inclusion_examples():
    assert envelope_inclusion_check(-E1, E1, math.pi / 2, 10_000, seed=1)
    assert envelope_inclusion_check(-E1, E1, 3.14, 2_000, seed=2)
    assert envelope_inclusion_check(O, E1, math.pi / 3, 10_000, seed=3)


def test_envelope_inclusion_by_direct_sampling(rng):
    """Independent oracle: rejection-sample the plane, test E ⊂ F pointwise."""
    x, y, alpha = np.array([0.0, 0.0]), np.array([1.0, 0.0]), math.pi / 3
    c = 1.0 / math.sin(alpha / 2)
    W = rng.uniform(-2, 3, size=(20_000, 2))
    a, b = x - W, y - W
    cosang = np.einsum("ij,ij->i", a, b) / (np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1))
    in_E = np.arccos(np.clip(cosang, -1, 1)) >= alpha
    in_F = np.linalg.norm(a, axis=1) + np.linalg.norm(b, axis=1) <= c * (1 + 1e-12)
    assert in_E.sum() > 500
    assert np.all(in_F[in_E])


def test_envelope_parameter_errors():
    with pytest.raises(InvalidParameter):
        in_envelope_E(E1, E1, 1.0, E2)
    with pytest.raises(InvalidParameter):
        in_envelope_F(-E1, E1, 1.0, O)
    with pytest.raises(DegenerateVertex):
        in_envelope_E(-E1, E1, 1.0, E1)


# -- domains ---------------------------------------------------------------------


def test_canonical_domains_membership():
    assert UnitBall(3).contains(np.array([0.5, 0.5, 0.5]))
    with pytest.raises(OutsideDomain):
        UnitBall(2).check([1.5, 0.0])
    with pytest.raises(OnBoundary):
        UnitBall(2).check([1.0, 0.0])
    with pytest.raises(OnBoundary):
        HalfSpace(2).check([3.0, 1e-13])
    with pytest.raises(OnBoundary):
        PuncturedSpace(2).check([0.0, 0.0])
    with pytest.raises(InvalidParameter):
        UnitBall(1)
    with pytest.raises(DimensionMismatch):
        HalfSpace(3).check([0.0, 1.0])


def test_polygon_and_circle_domains():
    square = Generic2D([Polygon([[-1, -1], [1, -1], [1, 1], [-1, 1]])])
    assert square.contains(np.array([0.9, -0.9]))
    assert not square.contains(np.array([1.1, 0.0]))
    assert square.boundary_distance(np.array([0.5, 0.0])) == pytest.approx(0.5)
    assert not square.pseudometric
    ring = Generic2D([Circle([0, 0], 2.0), Circle([0, 0], 1.0)])
    assert ring.contains(np.array([1.5, 0.0]))
    assert not ring.contains(np.array([0.5, 0.0]))
    assert ring.meets_open_segment(np.array([-1.5, 0.0]), np.array([1.5, 0.0]))


def test_polyline_arclength_parametrization():
    pl = Polygon([[0, 0], [2, 0], [2, 1]])
    assert pl.length == pytest.approx(3 + math.sqrt(5))
    assert np.allclose(pl.point_at(2.5), [2.0, 0.5])
    assert pl.nearest_param(np.array([1.0, -1.0])) == pytest.approx(1.0)


def test_line_boundary_is_flagged_pseudometric():
    slit = Generic2D([Polyline([[-1, 0], [1, 0]], closed=False)], exterior=True)
    assert slit.pseudometric and slit.unbounded


def test_bad_pieces_rejected():
    with pytest.raises(InvalidParameter):
        Polygon([[0, 0], [1, 0]])
    with pytest.raises(InvalidParameter):
        Generic2D([])
    with pytest.raises(InvalidParameter):
        Circle([0, 0], 0.0)
