"""Randomized properties via hypothesis."""
import math
from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st

from artifact import btree as bt
from artifact import geom
from artifact.mahler import mahler_measure
from artifact.numfield import IntPolynomial, dedekind_zeta, quadratic_field

small = st.integers(-6, 6)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=2, max_size=4), st.lists(small, min_size=2, max_size=4))
def test_mahler_multiplicative(a, b):
    f, g = IntPolynomial(tuple(a) + (1,)), IntPolynomial(tuple(b) + (1,))
    if f.coefficients[0] == 0 or g.coefficients[0] == 0:
        return
    assert math.isclose(mahler_measure(f * g), mahler_measure(f) + mahler_measure(g), abs_tol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20), st.integers(-20, 20))
def test_exact_weyl_discriminant_identity(a, b, c, d):
    if a * d - b * c == 0:
        return
    g = geom.MobiusElement(tuple(Fraction(x) for x in (a, b, c, d)))
    inv = geom.class_invariants(g)
    if inv.type in ("parabolic", "identity"):
        return
    lam = inv.lam
    assert abs(complex(inv.weyl_disc) - (2 - lam - 1 / lam)) < 1e-9 * max(1, abs(lam))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_conjugation_and_inverse_invariance(t, x, y, z):
    g = np.array([[math.exp(t), 0.3], [0.0, 1.0]])
    h = np.array([[1.0 + x * x, y], [z, 1.0]])
    if abs(np.linalg.det(h)) < 1e-3:
        return
    a = geom.class_invariants(geom.MobiusElement.of(g))
    b = geom.class_invariants(geom.MobiusElement.of(h @ g @ np.linalg.inv(h)))
    c = geom.class_invariants(geom.MobiusElement.of(np.linalg.inv(g)))
    assert abs(a.lam - b.lam) < 1e-8 * abs(a.lam) and abs(a.lam - c.lam) < 1e-8 * abs(a.lam)


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_distance_symmetric(x, y, z):
    from scipy.linalg import expm

    g = expm(np.array([[x, y], [z, -x]]))
    assert math.isclose(geom.frobenius_distance(g, np.eye(2)), geom.frobenius_distance(np.eye(2), g), rel_tol=1e-9, abs_tol=1e-12)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([-4, -3, 5, 8]), st.integers(10, 300))
def test_zeta_partial_products_increase(d, X):
    K = quadratic_field(d)
    assert dedekind_zeta(K, 2, X)[0] <= dedekind_zeta(K, 2, 2 * X)[0]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(-30, 30), st.integers(0, 3))
def test_tree_distance_triangle(p, num, m):
    a = bt.TreeVertex.make(m, Fraction(num, p ** (m + 1)), p)
    b = bt.TreeVertex.make(m + 1, Fraction(num + 1, p**m), p)
    c = bt.BASE
    assert bt.distance(a, c, p) <= bt.distance(a, b, p) + bt.distance(b, c, p)
