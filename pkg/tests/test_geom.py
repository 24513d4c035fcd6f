import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from artifact import geom


def _random(rng, complex_=False):
    X = rng.normal(size=(2, 2)) + (1j * rng.normal(size=(2, 2)) if complex_ else 0)
    return expm(X - np.trace(X) / 2 * np.eye(2))


def test_adjoint_matches_conjugation():
    rng = np.random.default_rng(0)
    basis = [np.diag([1, -1]) / math.sqrt(2), np.array([[0, 1], [0, 0]]), np.array([[0, 0], [1, 0]])]
    for complex_ in (False, True):
        g = _random(rng, complex_) * 1.7
        A = geom.adjoint(g)
        for j, X in enumerate(basis):
            Y = g @ X @ np.linalg.inv(g)
            coords = [np.sum(Y * B.conj()) for B in basis]
            assert np.allclose(coords, A[:, j])


def test_distance_of_diag():
    assert math.isclose(geom.frobenius_distance(np.diag([2.0, 1.0]), np.eye(2)), math.sqrt(1.25))
    assert geom.frobenius_distance(np.diag([2.0, 1.0]), np.diag([2.0, 1.0])) == 0


def test_left_invariance():
    rng = np.random.default_rng(1)
    for _ in range(100):
        x, y, h = (_random(rng) for _ in range(3))
        assert math.isclose(geom.frobenius_distance(h @ x, h @ y), geom.frobenius_distance(x, y), rel_tol=1e-9, abs_tol=1e-9)


def test_triangle_inequality_fails_along_a_torus():
    # d(1, g^k) grows like |lambda|^k, so d(g^2, 1) > d(g^2, g) + d(g, 1)
    g = np.diag([2.0, 1.0])
    lhs = geom.frobenius_distance(g @ g, np.eye(2))
    rhs = geom.frobenius_distance(g @ g, g) + geom.frobenius_distance(g, np.eye(2))
    assert lhs > rhs + 0.8


def test_rotation_invariants():
    th = 0.3
    inv = geom.class_invariants(geom.MobiusElement.rotation(th))
    assert inv.type == "elliptic"
    assert abs(inv.lam - complex(math.cos(2 * th), math.sin(2 * th))) < 1e-12
    assert abs(inv.weyl_disc - 4 * math.sin(th) ** 2) < 1e-12


def test_exact_weyl_discriminant():
    g = geom.MobiusElement((Fraction(3), Fraction(0), Fraction(0), Fraction(1)))
    inv = geom.class_invariants(g)
    assert inv.type == "hyperbolic" and inv.weyl_disc == Fraction(2) - 3 - Fraction(1, 3)


def test_golden_mahler_link():
    g = geom.MobiusElement((2, 1, 1, 1))
    inv = geom.class_invariants(g, "x^2 - 3*x + 1")
    assert inv.mahler_target == "eigenvalue"
    assert abs(inv.mahler - 2 * 0.4812118250596034) < 1e-12 and inv.mahler_consistent


def test_parabolic_and_identity():
    assert geom.class_invariants(geom.MobiusElement((1, 1, 0, 1))).type == "parabolic"
    assert geom.class_invariants(geom.MobiusElement((2, 0, 0, 2))).type == "identity"
    with pytest.raises(ValueError):
        geom.meets_ball(geom.MobiusElement((1, 1, 0, 1)), 1.0)


def test_meets_ball():
    assert geom.meets_ball(geom.MobiusElement((1, 0, 0, 1)), 0.1)
    assert not geom.meets_ball(geom.MobiusElement.diag(math.exp(10), 1.0), 1.0)


@pytest.mark.parametrize("complex_", [False, True])
def test_normal_form_is_class_minimum(complex_):
    rng = np.random.default_rng(2)
    g = _random(rng, complex_)
    inv = geom.class_invariants(geom.MobiusElement.of(g, "complex" if complex_ else "real"))
    dmin = geom.normal_form_distance(inv.lam)
    for _ in range(50):
        h = _random(rng, complex_)
        assert geom.frobenius_distance(h @ g @ np.linalg.inv(h), np.eye(2)) >= dmin - 1e-6


def test_bump_support():
    f = geom.RadialBump(1.0, 0.2)
    assert f.profile(0.1) == 1.0 and f.profile(1.0) == 0.0 and 0 < f.profile(0.6) < 1


def test_split_misses_small_support():
    assert geom.orbital_split(geom.MobiusElement.diag(math.exp(5), 1.0), geom.RadialBump(0.1)) == 0.0


def test_split_against_bruteforce():
    g = geom.MobiusElement.diag(2.0, 1.0)
    f = geom.RadialBump(3.0, 0.5)
    a, b = geom.orbital_split(g, f), geom.orbital_bruteforce(g, f, 1e-6)
    assert abs(a - b) <= 1e-3 * abs(b)


def test_elliptic_monotone_in_angle():
    f = geom.RadialBump(4.0, 0.5)
    vals = [geom.orbital_elliptic(geom.MobiusElement.rotation(t), f) for t in (math.pi / 2, math.pi / 4, math.pi / 6, math.pi / 12)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_elliptic_rejects_complex_and_split():
    with pytest.raises(ValueError):
        geom.orbital_elliptic(geom.MobiusElement.diag(2.0, 1.0), geom.RadialBump(3.0))
    with pytest.raises(ValueError):
        geom.orbital_split(geom.MobiusElement((1j, 0, 0, 1), "complex"), geom.RadialBump(3.0))
