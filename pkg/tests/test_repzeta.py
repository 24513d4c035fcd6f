from fractions import Fraction

import pytest

from artifact import repzeta as rz


@pytest.mark.parametrize("q", [3, 5, 7, 11])
def test_sum_of_squares(q):
    ok, ledger = rz.sum_of_squares_check(q, 4)
    assert ok and ledger[-1]["cumulative"] == rz.sl2_group_order(q, 4)


def test_level_one_q5():
    ms = rz.jz_level_multiset(5, 1)
    assert ms.sum_of_squares() == 120 and ms.count() == 9


def test_even_q_rejected():
    with pytest.raises(ValueError):
        rz.jz_level_multiset(4, 1)


def test_carayol_dimensions():
    assert rz.carayol_dim(3, 2) == 2
    assert rz.carayol_dim(3, 3) == 4
    assert rz.carayol_dim(5, 4) == 10


def test_odd_level_dimensions_exceed_q_minus_one():
    for q in (3, 5, 7, 11):
        for c in (3, 5, 7):
            assert rz.carayol_dim(q, c) >= q - 1


def test_local_bounds():
    assert rz.special_zeta_local_bound("pgl_vertex", 3) == Fraction(9, 8)
    assert rz.special_zeta_local_bound("ramified", 3) == Fraction(9, 8) * 4
    assert rz.min_dim_bound("ramified", 5) == (2, 6)
