import random
from fractions import Fraction

import numpy as np
import pytest

from artifact import btree as bt


def test_ball_sizes():
    for p in (2, 3):
        for r in range(4):
            assert len(bt.ball(p, r)) == 1 + (p + 1) * (p**r - 1) // (p - 1)


def test_neighbors_are_at_distance_one():
    v = bt.TreeVertex.make(2, Fraction(5, 9), 3)
    for w in bt.neighbors(v, 3):
        assert bt.distance(v, w, 3) == 1


def test_action_is_isometric():
    g = bt.GL2Rational.parse("1,2;3,7")
    verts = list(bt.ball(3, 3))
    random.seed(0)
    for _ in range(50):
        a, b = random.sample(verts, 2)
        assert bt.distance(bt.act(g, a, 3), bt.act(g, b, 3), 3) == bt.distance(a, b, 3)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_vectorized_displacement_matches_action(p):
    g = bt.sample_element("unramified", p, 2)
    m, B, s = bt._ball_arrays(p, 4)
    disp = bt._displacement(g, p, m, B, s)
    for i in range(0, len(m), max(1, len(m) // 60)):
        v = bt.TreeVertex.make(int(m[i]), Fraction(int(B[i]), p ** int(s[i])), p)
        assert disp[i] == bt.distance(v, bt.act(g, v, p), p)


def test_split_fixed_set_is_strip():
    rep = bt.check_fixed_geometry("split", 3, 2)
    assert rep["shape_ok"] and rep["counts_ok"] and rep["connected"]


def test_closed_forms():
    C = bt.LocalClassData
    assert bt.fixed_count_closed_form(C(3, 4, "unramified", "vertex")) == 1 + 4 * 4
    assert bt.fixed_count_closed_form(C(3, 2, "split", "vertex")) == 3
    with pytest.raises(NotImplementedError):
        C(2, 3, "tamely_ramified", "vertex")


def test_weight_series_converges():
    s = bt.tree_weight_partial_sum(3, 30)
    assert 0 < bt.tree_weight_limit(3) - s < Fraction(1, 3**29)


def test_weyl_discriminant_exact():
    g = bt.GL2Rational.parse("0,-2;1,0")
    assert g.weyl_discriminant() == 4
