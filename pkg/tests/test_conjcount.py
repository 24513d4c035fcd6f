import math
from fractions import Fraction

import pytest

from artifact import conjcount as cc
from artifact.numfield import LEHMER, cyclotomic, parse_poly, roots


def test_normalized_traces():
    assert cc.normalized_trace("x^8 - 2") == 0
    assert cc.normalized_trace("x^2 - x - 1") == 0.5
    assert cc.normalized_trace_exact(cyclotomic(11)) == Fraction(1, 10)


def test_trace_matches_root_sum():
    f = parse_poly("x^5 - 3*x^4 + x - 7")
    assert abs(abs(complex(sum(roots(f)))) / 5 - cc.normalized_trace(f)) < 1e-9


def test_cyclotomic_decay_within_shape():
    rows, ledger = cc.trace_decay_sweep(cc.cyclotomic_prime_family(101))
    assert all(r["trace"] <= r["shape"] for r in rows) and not ledger["unbounded_mahler"]


def test_unbounded_family_flagged():
    _, ledger = cc.trace_decay_sweep([parse_poly("x^2 - 10"), parse_poly("x^3 - 2")])
    assert ledger["unbounded_mahler"] == ["x^2 - 10"]


def test_power_sums():
    assert cc.power_sum(LEHMER, 1) == -1
    assert cc.power_sum(parse_poly("x^2 - 3*x + 1"), 2) == 7


def test_gram_presets():
    polys, K = cc.salem_presets()
    g = cc.gram_diagnostics(polys, K)
    assert all(abs(g.gram[i, i] - float(e)) < 1e-9 for i, e in enumerate(g.expected_diag))
    assert g.off_diag_max < 1 and g.rank == 3


def test_gram_rank_one_for_repeats():
    polys, K = cc.salem_presets()
    assert cc.gram_diagnostics([polys[0], polys[0]], K).rank == 1


def test_gram_rejects_foreign_numbers():
    _, K = cc.salem_presets()
    with pytest.raises(cc.EmbeddingMismatchError):
        # a Salem quartic whose trace generates Q(sqrt(13)), not a subfield of a quintic field
        cc.gram_diagnostics([parse_poly("x^4 - x^3 - x^2 - x + 1")], K)


def test_kl_bound():
    assert cc.kl_packing_bound(100, 1.0) == 100
    assert cc.kl_packing_bound(200, 1.0) > cc.kl_packing_bound(100, 1.0)
    with pytest.raises(ValueError):
        cc.kl_packing_bound(100, math.sqrt(100) / 2)
    with pytest.raises(ValueError):
        cc.kl_packing_bound(100, 0.5)


def test_calibration_pinned():
    C, count = cc.calibrate_constant(50, 1.0)
    assert C == 1.0 and count <= cc.kl_packing_bound(50, 1.0)
