import json
import math

import pytest

from artifact import volume as vol
from artifact.numfield import quadratic_field, rationals


def test_real_oracle_both_modes():
    assert abs(vol.local_ratio_real_oracle()[0] - math.pi / 2) < 1e-10
    assert abs(vol.local_ratio_real_oracle(resolution=1000)[0] - math.pi / 2) < 1e-10


def test_oracle_guards():
    with pytest.raises(ValueError):
        vol.local_ratio_real_oracle(resolution=10)
    with pytest.raises(ValueError):
        vol.local_ratio_real_oracle(tol=1e-3)


def test_complex_oracle_is_pi_over_12():
    # three independent evaluations of the upper-half-space integral
    assert abs(vol.local_ratio_complex_oracle()[0] - math.pi / 12) < 1e-8
    assert abs(vol.local_ratio_complex_oracle(resolution=100)[0] - math.pi / 12) < 1e-8
    assert abs(vol.complex_inner_reduction() - math.pi / 12) < 1e-9


def test_ratio_reports_consistent():
    rows = vol.ratio_reports()
    assert len(rows) == 6 and all(r.discrepancy < 1e-6 for r in rows)


def test_covolume_over_q():
    assert str(vol.covolume(vol.LatticeSpec(rationals(), "real", [2, 3], [])).exact) == "pi/3"
    assert str(vol.covolume(vol.LatticeSpec(rationals(), "real", [], [])).exact) == "pi/6"


def test_bianchi_covolume():
    # PGL(2, O) for Q(sqrt -3): 3^(3/2) zeta_K(2) / (4 pi^2) = 0.0845785...; the computed value must bracket it
    c = vol.covolume(vol.LatticeSpec(quadratic_field(-3), "complex", [], []))
    assert abs(c.value - 2.029883212819307 / 24) <= c.error + 1e-6


def test_spec_validation():
    with pytest.raises(vol.InadmissibleSpecError):
        vol.LatticeSpec(rationals(), "real", [2], []).validate()
    with pytest.raises(ValueError):
        vol.LatticeSpec.from_json(json.dumps({"field": "Q", "archimedean_type": "real", "colour": 1}))


@pytest.mark.parametrize("d", [-4, -3, 5, -8, 8])
def test_torus_two_routes(d):
    assert vol.torus_volume_quadratic(d)["agree"]


def test_nerve_constant():
    assert abs(vol.nerve_degree_constant() - 244.5236568) < 1e-6
