import math

import pytest

from artifact import mahler as mh
from artifact.numfield import LEHMER, cyclotomic


def test_lehmer_value_and_type():
    assert abs(mh.mahler_measure(LEHMER) - 0.1623576120) < 1e-9
    assert mh.classify(LEHMER) == "salem_like"


@pytest.mark.parametrize("m", [1, 2, 3, 5, 12, 30])
def test_cyclotomic_is_kronecker(m):
    assert mh.mahler_measure(cyclotomic(m)) == 0.0
    assert mh.classify(cyclotomic(m)) == "kronecker"


def test_other():
    assert mh.classify("x^2 - 2") == "other"
    assert abs(mh.mahler_measure("x^2 - 2") - math.log(2)) < 1e-12


def test_norm_one_minus_is_f_of_one():
    assert mh.norm_one_minus("x^3 - 2") == -1
    assert mh.norm_one_minus(LEHMER) == -1


def test_discrepancy_of_pure_powers():
    for n in (8, 16, 32):
        assert abs(mh.bilu_discrepancy(mh.RootMeasure.of(mh.pure_power(n))) - 1 / n) < 1e-12


def test_test_function_averages_vanish_for_roots_of_unity():
    avg = mh.test_function_averages(mh.RootMeasure.of(cyclotomic(7)), kmax=3)
    assert all(abs(v - (-1 / 6 if k.startswith("cos") else 0)) < 1e-12 for k, v in avg.items())


def test_non_monic_rejected():
    with pytest.raises(ValueError):
        mh.mahler_measure("2*x - 1")


def test_dobrowolski_floor():
    assert 0 < mh.dobrowolski_floor(10) < 1
