import math
import warnings

import mpmath
import pytest
import sympy

from artifact import numfield as nf


def test_parse_forms_agree():
    a = nf.parse_poly("x^3 - 2*x + 1")
    b = nf.parse_poly([1, -2, 0, 1])
    assert a == b and a.degree == 3 and a(1) == 0


@pytest.mark.parametrize("bad", ["x^2+", "y^2 - 1", "x^1.5", ""])
def test_parse_rejects(bad):
    with pytest.raises(nf.PolynomialParseError):
        nf.parse_poly(bad)


def test_lehmer_is_irreducible():
    x = sympy.Symbol("x")
    factors = sympy.factor_list(nf.LEHMER.to_sympy(x).as_expr())[1]
    assert len(factors) == 1 and factors[0][1] == 1


def test_lehmer_discriminant_and_signature():
    assert nf.poly_discriminant(nf.LEHMER) == 36497**2
    assert nf.signature(nf.LEHMER) == (2, 4)
    assert nf.dedekind_p_maximal(nf.LEHMER, 36497)


def test_roots_refined():
    f = nf.parse_poly("x^5 - x - 1")
    with mpmath.workdps(50):
        for r in nf.roots(f):
            assert abs(sum(c * r**k for k, c in enumerate(f.coefficients))) < 1e-30


def test_quadratic_splitting():
    K = nf.quadratic_field(-4)
    assert nf.prime_splitting(K, 5).factors == ((1, 1), (1, 1))
    assert nf.prime_splitting(K, 3).factors == ((2, 1),)
    assert nf.prime_splitting(K, 2).factors == ((1, 2),)


def test_prime_count_fourth_root_of_two():
    # (2) is totally ramified, 3 = p1 p1' p2, 5 = p p' p'' , 7 = p q: norms <= 8 give 3 ideals
    K = nf.preset("Q(2^(1/4))")
    assert nf.prime_count(K, 8) == 3


def test_nonmaximal_prime_skipped_with_warning():
    K = nf.NumberField(nf.parse_poly("x^2 + 3"), "Z[sqrt -3]", frozenset())
    with pytest.raises(nf.NonMaximalOrderError):
        nf.prime_splitting(K, 3)
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        nf.prime_count(K, 10)
    assert any(issubclass(x.category, nf.PrimeSkippedWarning) for x in w)


def test_zeta_of_rationals():
    v, tail = nf.dedekind_zeta(nf.rationals(), 2, 10**4)
    assert abs(float(v) - math.pi**2 / 6) <= float(tail)


def test_zeta_factorizes_for_quadratic_field():
    # zeta_K(2) = zeta(2) L(2, chi_-4) = zeta(2) * Catalan
    v, tail = nf.dedekind_zeta(nf.quadratic_field(-4), 2, 10**4)
    assert abs(float(v) - math.pi**2 / 6 * 0.915965594177219) <= float(tail) + 1e-9


def test_dirichlet_L_values():
    L, err = nf.dirichlet_L_quadratic(-4, 10**4)
    assert abs(L - math.pi / 4) <= err
    L, err = nf.dirichlet_L_quadratic(5, 10**4)
    assert abs(L - 2 * math.log((1 + math.sqrt(5)) / 2) / math.sqrt(5)) <= err


def test_fundamental_discriminants():
    assert [d for d in range(-12, 14) if nf.is_fundamental_discriminant(d)] == [-11, -8, -7, -4, -3, 5, 8, 12, 13]


def test_presets():
    assert nf.preset("Q(zeta_5)").degree == 4
    assert nf.preset("Q(sqrt(-3))").poly_discriminant == -3
    with pytest.raises(ValueError):
        nf.preset("Q(pi)")
