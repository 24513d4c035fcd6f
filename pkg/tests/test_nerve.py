import numpy as np

from artifact import nerve


def _line(points, inj):
    pts = np.asarray(points, dtype=float)
    return nerve.MetricSampleSpace(pts, lambda i, idx: np.abs(pts[idx] - pts[i]), np.full(len(pts), inj), "euclidean", 1)


def test_single_point():
    sp = _line([0.0], 1.0)
    c = nerve.greedy_packing(sp)
    assert c == [0]
    nv = nerve.build_nerve(sp, c)
    assert nerve.degree_bound(sp, nv) == (0, 6)


def test_two_far_points_no_edge():
    sp = _line([0.0, 10.0], 1.0)
    c = nerve.greedy_packing(sp)
    assert c == [0, 1] and not nerve.build_nerve(sp, c).edges


def test_torus_packing_cover_degree():
    sp = nerve.flat_torus(samples=2500, seed=3)
    c = nerve.greedy_packing(sp)
    assert nerve.packing_violations(sp, c) == 0
    assert nerve.cover_check(sp, c).coverage == 1.0
    nv = nerve.build_nerve(sp, c)
    assert nv.is_connected() and nv.is_downward_closed()
    deg, bound = nerve.degree_bound(sp, nv)
    assert deg <= bound == 36


def test_removing_a_center_loses_coverage():
    sp = nerve.flat_torus(samples=2500, seed=3)
    c = nerve.greedy_packing(sp)
    d = sp.dist_to(0, np.array(c))
    kept = [x for x, dx in zip(c, d) if dx >= nerve.COVER * sp.inj[x]]
    rep = nerve.cover_check(sp, kept)
    assert rep.coverage < 1 and rep.uncovered[0]["sample"] == 0


def test_poincare_patch():
    sp = nerve.poincare_patch(samples=800, seed=1)
    assert all(v == 0 for v in sp.spot_check().values())
    res = nerve.run(sp)
    assert res["coverage"] == 1.0 and res["packing_violations"] == 0 and res["max_degree"] <= res["degree_bound"]


def test_determinism():
    assert nerve.run(nerve.flat_torus(samples=1000, seed=5)) == nerve.run(nerve.flat_torus(samples=1000, seed=5))
