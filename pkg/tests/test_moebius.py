import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from visangle.closed_form import v_ball
from visangle.errors import CoincidentPoints, DegeneratePoints, DimensionMismatch, InvalidParameter
from visangle.geometry import INF, angle_at
from visangle.moebius import (
    HyperplaneReflection,
    MoebiusMap,
    SphereInversion,
    absolute_ratio,
    angular_characteristic,
    canonical_T_a,
    cayley_half_to_ball,
    chordal,
    real_fractional,
    tangent_circle_ball,
    tangent_circle_half,
)

E1, E2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
O = np.zeros(2)


def c2p(z):
    return np.array([z.real, z.imag])


def random_map(rng, n=2):
    gens = []
    for _ in range(rng.integers(1, 5)):
        if rng.random() < 0.5:
            gens.append(HyperplaneReflection(rng.normal(size=n), rng.normal()))
        else:
            gens.append(SphereInversion(rng.normal(size=n), rng.uniform(0.3, 3.0)))
    return MoebiusMap(gens, n)


def chordal_ext(p, q):
    return chordal(p, q)


# -- generators ------------------------------------------------------------------


def test_generator_examples():
    inv = MoebiusMap([SphereInversion(O, 1.0)])
    assert np.allclose(inv(2 * E1), 0.5 * E1)
    assert inv(O) is INF
    assert np.allclose(inv(INF), O)
    refl = MoebiusMap([HyperplaneReflection(E2, 0.0)])
    assert np.allclose(refl([3.0, 5.0]), [3.0, -5.0])
    with pytest.raises(InvalidParameter):
        HyperplaneReflection([0.0, 0.0])
    with pytest.raises(InvalidParameter):
        SphereInversion(O, -1.0)
    with pytest.raises(DimensionMismatch):
        MoebiusMap([SphereInversion([0, 0, 0], 1.0)], 2)


@pytest.mark.parametrize("n", [2, 3])
def test_round_trip_random_maps(rng, n):
    worst = 0.0
    for _ in range(1000):
        f = random_map(rng, n)
        x = rng.normal(size=n) * 3
        back = f.inverse()(f(x))
        worst = max(worst, chordal_ext(back, x))
    assert worst < 1e-10


def test_apply_array_matches_pointwise(rng):
    f = random_map(rng)
    P = rng.normal(size=(20, 2))
    assert np.allclose(f.apply_array(P), np.array([f(p) for p in P]), atol=1e-12)


def test_absolute_ratio_invariant_under_random_maps(rng):
    worst = 0.0
    for _ in range(1000):
        f = random_map(rng)
        q = rng.normal(size=(4, 2)) * 2
        before = absolute_ratio(*q)
        after = absolute_ratio(*[f(p) for p in q])
        worst = max(worst, abs(after - before) / before)
    assert worst < 1e-9


# -- canonical maps --------------------------------------------------------------


def test_T_a_examples():
    T = canonical_T_a(0.5 * E1)
    assert np.allclose(T(0.5 * E1), O, atol=1e-15)
    assert np.allclose(T(E1), E1)
    assert np.allclose(T(O), -0.5 * E1)


@given(st.complex_numbers(max_magnitude=0.95), st.complex_numbers(max_magnitude=0.99))
def test_T_a_matches_complex_formula(a, z):
    if abs(a) < 1e-6:
        return
    expected = (z - a) / (1 - a.conjugate() * z)
    assert np.allclose(canonical_T_a(c2p(a))(c2p(z)), c2p(expected), atol=1e-9)


def test_T_a_keeps_ball(rng):
    for _ in range(10):
        a = rng.uniform(-0.7, 0.7, 2)
        r = np.sqrt(rng.uniform(0, 1, 100)) * 0.999
        phi = rng.uniform(0, 2 * math.pi, 100)
        P = np.stack([r * np.cos(phi), r * np.sin(phi)], axis=1)
        assert np.all(np.linalg.norm(canonical_T_a(a).apply_array(P), axis=1) < 1 + 1e-12)
    with pytest.raises(InvalidParameter):
        canonical_T_a([1.0, 0.0])


def test_cayley_examples():
    C = cayley_half_to_ball()
    assert np.allclose(C(E2), O, atol=1e-15)
    assert np.allclose(C(O), [-1.0, 0.0])
    assert np.allclose(C([1.0, 1.0]), [0.2, -0.4])


@given(st.floats(-5, 5), st.floats(0.01, 5))
def test_cayley_matches_complex_formula(re, im):
    z = complex(re, im)
    assert np.allclose(cayley_half_to_ball()(c2p(z)), c2p((z - 1j) / (z + 1j)), atol=1e-12)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3),
       st.floats(-4, 4), st.floats(0.05, 4))
def test_real_fractional_matches_complex_formula(a, b, c, d, re, im):
    if a * d - b * c < 0.05:
        return
    z = complex(re, im)
    if abs(c * z + d) < 1e-3:
        return
    w = (a * z + b) / (c * z + d)
    got = real_fractional(a, b, c, d)(c2p(z))
    assert np.allclose(got, c2p(w), rtol=1e-9, atol=1e-9)
    assert got[1] > 0


@pytest.mark.parametrize("c", [1e-300, 1e-131, 1e-12, 1e-6, 1e-2])
def test_real_fractional_small_c_is_accurate(c):
    z = complex(0.3, 1.7)
    for a, b, d in [(1.75, 0.0, 1.0), (2.0, -3.0, 0.5), (-1.0, 4.0, -2.0)]:
        w = (a * z + b) / (c * z + d)
        assert np.allclose(real_fractional(a, b, c, d)(c2p(z)), c2p(w), rtol=1e-12, atol=1e-12)


# -- chordal metric and four-point invariants ----------------------------------------


def test_chordal_examples():
    assert chordal(O, INF) == 1.0
    assert chordal(E1, -E1) == pytest.approx(1.0)
    assert chordal(O, E1) == pytest.approx(1 / math.sqrt(2))
    assert chordal(INF, INF) == 0.0


def test_chordal_matches_stereographic_embedding(rng):
    def lift(p):
        s = 1 + p @ p
        return np.concatenate([2 * p, [p @ p - 1]]) / s

    for _ in range(50):
        x, y = rng.normal(size=(2, 3))
        # q is half the Euclidean distance of the lifts to the unit sphere
        assert chordal(x, y) == pytest.approx(0.5 * np.linalg.norm(lift(x) - lift(y)), rel=1e-12)


def test_absolute_ratio_examples():
    assert absolute_ratio(O, E1, 2 * E1, 3 * E1) == pytest.approx(4.0)
    assert absolute_ratio(O, E1, 2 * E1, INF) == pytest.approx(2.0)
    with pytest.raises(DegeneratePoints):
        absolute_ratio(O, O, E1, E2)


def test_absolute_ratio_inversion_invariance(rng):
    inv = MoebiusMap([SphereInversion(O, 1.0)])
    q = rng.normal(size=(4, 2))
    assert absolute_ratio(*[inv(p) for p in q]) == pytest.approx(absolute_ratio(*q), rel=1e-10)


def test_angular_characteristic_examples():
    pts = [np.array([t, 0.0]) for t in (0.0, 1.0, 3.0, 2.0)]
    assert angular_characteristic(*pts) == pytest.approx(3 / 5)
    assert angular_characteristic(O, E1, INF, -E1) == pytest.approx(1.0)
    z, x, y = np.array([0.3, 2.0]), np.array([1.0, 0.5]), np.array([-1.0, 0.2])
    expected = np.linalg.norm(x - y) / (np.linalg.norm(z - x) + np.linalg.norm(z - y))
    assert angular_characteristic(z, x, INF, y) == pytest.approx(expected)


def test_angular_characteristic_ptolemy(rng):
    Q = rng.normal(size=(10_000, 4, 2))
    vals = [angular_characteristic(*q) for q in Q]
    assert max(vals) <= 1.0 + 1e-12


# -- tangent circles -----------------------------------------------------------------


def test_tangent_circle_ball_symmetric_example():
    tc = tangent_circle_ball(0.5 * E1, -0.5 * E1)
    assert abs(tc.center[0]) < 1e-15
    assert abs(tc.center[1]) == pytest.approx(0.375)
    assert tc.radius == pytest.approx(0.625)
    assert np.allclose(np.abs(tc.tangency), [0.0, 1.0])
    # deterministic tie-break: larger second coordinate
    assert tc.center[1] > 0


def test_tangent_circle_ball_root_finder_oracle():
    """Independent oracle: bisect |x - z(t)| + |z(t)| = 1 along the bisector."""
    from scipy.optimize import brentq

    x, y = np.array([0.3, 0.4]), np.array([-0.6, 0.1])
    m = 0.5 * (x + y)
    d = y - x
    u = np.array([-d[1], d[0]]) / np.linalg.norm(d)
    g = lambda t: np.linalg.norm(x - (m + t * u)) + np.linalg.norm(m + t * u) - 1.0
    ts = np.linspace(-3, 3, 6001)
    vals = np.array([g(t) for t in ts])
    roots = [brentq(g, ts[i], ts[i + 1]) for i in np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))]
    big = max((m + t * u for t in roots), key=np.linalg.norm)
    tc = tangent_circle_ball(x, y)
    assert np.allclose(tc.center, big, atol=1e-10)


def test_tangent_circle_ball_zero_point():
    tc = tangent_circle_ball(O, 0.5 * E1)
    assert angle_at(O, tc.tangency, 0.5 * E1) == pytest.approx(math.asin(0.5), abs=1e-9)
    with pytest.raises(CoincidentPoints):
        tangent_circle_ball(0.2 * E1, 0.2 * E1)


@pytest.mark.parametrize("n", [2, 3])
def test_tangent_circle_ball_invariants(rng, n):
    for _ in range(300):
        P = rng.normal(size=(2, n))
        P *= (rng.uniform(0, 1, (2, 1)) ** (1 / n)) * 0.999 / np.linalg.norm(P, axis=1, keepdims=True)
        x, y = P
        tc = tangent_circle_ball(x, y)
        assert np.linalg.norm(tc.center - x) == pytest.approx(tc.radius, abs=1e-10)
        assert np.linalg.norm(tc.center - y) == pytest.approx(tc.radius, abs=1e-10)
        assert np.linalg.norm(tc.center) + tc.radius == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.norm(tc.center - tc.tangency) == pytest.approx(tc.radius, abs=1e-10)
        assert angle_at(x, tc.tangency, y) == pytest.approx(float(v_ball(x, y)), abs=1e-9)


def test_tangent_circle_half_examples():
    (tc,) = tangent_circle_half([-1.0, 1.0], [1.0, 1.0])
    assert np.allclose(tc.center, [0.0, 1.0])
    assert tc.radius == pytest.approx(1.0)
    circles = tangent_circle_half([0.0, 1.0], [0.0, 2.0])
    assert len(circles) == 2
    for c in circles:
        for p in ([0.0, 1.0], [0.0, 2.0]):
            assert np.linalg.norm(c.center - p) == pytest.approx(c.radius, abs=1e-10)
        assert c.center[1] == pytest.approx(c.radius, abs=1e-10)
    with pytest.raises(CoincidentPoints):
        tangent_circle_half([0.0, 1.0], [0.0, 1.0])


@given(st.floats(-5, 5), st.floats(0.05, 5), st.floats(-5, 5), st.floats(0.05, 5))
def test_tangent_circle_half_invariants(x1, x2, y1, y2):
    x, y = np.array([x1, x2]), np.array([y1, y2])
    if np.linalg.norm(x - y) < 1e-3:
        return
    for c in tangent_circle_half(x, y):
        scale = max(1.0, c.radius)
        assert np.linalg.norm(c.center - x) == pytest.approx(c.radius, abs=1e-10 * scale)
        assert np.linalg.norm(c.center - y) == pytest.approx(c.radius, abs=1e-10 * scale)
        assert c.center[1] == pytest.approx(c.radius, abs=1e-10 * scale)
