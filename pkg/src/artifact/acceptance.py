"""The acceptance battery: one function per criterion, each returning a result record.

Shared by ``artifact suite`` and tests/test_acceptance.py so both run the same checks.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import expm


@dataclass
class Result:
    number: int
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{status}] criterion {self.number:2d} {self.title}: {shown} ({self.seconds:.2f} s)"

    def as_dict(self, timings=False):
        out = dict(number=self.number, title=self.title, passed=self.passed, measured=_jsonable(self.measured))
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def _timed(number, title, fn, limit=None):
    t0 = time.perf_counter()
    passed, measured = fn()
    dt = time.perf_counter() - t0
    if limit is not None:
        measured["time_limit_s"] = limit
        passed = passed and dt < limit
    return Result(number, title, bool(passed), measured, dt)


# --- criteria ------------------------------------------------------------------

def c1_tree(profile="full"):
    from .btree import ACCEPTANCE_GRID, check_fixed_geometry

    def run():
        reports = [check_fixed_geometry(t, p, v, radius=8) for t, p, v in ACCEPTANCE_GRID]
        bad = [(r["torus_type"], r["p"], r["v"]) for r in reports if not (r["shape_ok"] and r["counts_ok"])]
        return not bad, dict(cases=len(reports), failures=bad)

    return _timed(1, "tree fixed sets vs closed forms", run, 30)


def c2_tree_weight(profile="full"):
    from .btree import tree_weight_limit, tree_weight_partial_sum

    def run():
        s = tree_weight_partial_sum(2, 20)
        tail = Fraction(5, 2) - s
        ok = tree_weight_limit(2) == Fraction(5, 2) and 0 < tail < Fraction(1, 2**19)
        return ok, dict(partial_sum=s, tail=float(tail), tail_bound=2.0**-19)

    return _timed(2, "tree weight partial sum", run)


def c3_repzeta(profile="full"):
    from .repzeta import jz_level_multiset, sum_of_squares_check

    def run():
        qs = (3, 5, 7, 11)
        oks = {q: sum_of_squares_check(q, 4)[0] for q in qs}
        level1 = jz_level_multiset(5, 1).sum_of_squares()
        return all(oks.values()) and level1 == 120, dict(checks=oks, q5_level1=level1)

    return _timed(3, "representation degree sums", run, 1)


def c4_measure_ratios(profile="full"):
    from .volume import local_ratio_complex_oracle, local_ratio_real_oracle

    def run():
        rv, rr = local_ratio_real_oracle()
        cv, cr = local_ratio_complex_oracle()
        real_ok = abs(rv - math.pi / 2) <= 1e-6 and abs(rr - 2 * math.pi) <= 1e-5
        complex_ok = abs(cv - math.pi / 6) <= 1e-6 and abs(cr - 8 * math.pi**2) <= 1e-4
        return real_ok and complex_ok, dict(
            real_integral=rv, real_target=math.pi / 2, real_ratio=rr,
            complex_integral=cv, complex_target=math.pi / 6, complex_ratio=cr,
            complex_ratio_target=8 * math.pi**2, complex_over_pi=cv / math.pi)

    return _timed(4, "local measure ratios", run, 20)


def c5_nerve_constant(profile="full"):
    from .volume import nerve_degree_constant

    def run():
        c = nerve_degree_constant()
        return abs(c - 244.52) <= 0.01, dict(ratio=c)

    return _timed(5, "nerve volume ratio", run)


def c6_covolume(profile="full"):
    import sympy

    from .numfield import rationals
    from .volume import LatticeSpec, covolume

    def run():
        base = covolume(LatticeSpec(rationals(), "real", [2, 3], []))
        doubled = covolume(LatticeSpec(rationals(), "real", [2, 3], [], index_UV=2))
        tripled = covolume(LatticeSpec(rationals(), "real", [2, 3], [], index_UV=3))
        exact_ok = sympy.simplify(base.exact - sympy.pi / 3) == 0
        linear = sympy.simplify(doubled.exact - 2 * base.exact) == 0 and sympy.simplify(tripled.exact - 3 * base.exact) == 0
        return exact_ok and abs(base.value - math.pi / 3) <= 1e-9 and linear, dict(
            exact=str(base.exact), value=base.value, linear_in_index=linear)

    return _timed(6, "covolume over Q", run)


def c7_torus(profile="full"):
    from .volume import torus_volume_quadratic

    def run():
        r4 = torus_volume_quadratic(-4)
        routes = {d: torus_volume_quadratic(d)["agree"] for d in (-4, -3, 5)}
        ok = abs(r4["vol_lambda"] - 0.25) <= 1e-3 and abs(r4["L"] - math.pi / 4) <= 1e-3 and all(routes.values())
        return ok, dict(volume=r4["vol_lambda"], L=r4["L"], routes_agree=routes)

    return _timed(7, "norm torus volume", run, 5)


def c8_mahler(profile="full"):
    from .mahler import classify, family_sweep, mahler_measure
    from .numfield import LEHMER, cyclotomic

    def run():
        ms = range(1, 31)
        cyc_ok = all(mahler_measure(cyclotomic(m)) == 0.0 and classify(cyclotomic(m)) == "kronecker" for m in ms)
        lehmer = mahler_measure(LEHMER)
        top = 256 if profile == "full" else 64
        ns = [2**k for k in range(3, int(math.log2(top)) + 1)]
        rows = family_sweep(ns)
        disc = [r["discrepancy"] for r in rows]
        decreasing = all(a > b for a, b in zip(disc, disc[1:]))
        norms_ok = all(abs(r["norm_one_minus"]) == 1 for r in rows)
        ok = cyc_ok and abs(lehmer - 0.162358) <= 1e-6 and decreasing and norms_ok
        return ok, dict(cyclotomic_kronecker=cyc_ok, lehmer=lehmer, n_max=top,
                        discrepancies=[round(d, 12) for d in disc], norms_one=norms_ok)

    return _timed(8, "Mahler measure and equidistribution", run, 30)


def c9_prime_escape(profile="full"):
    from .numfield import prime_count, pure_field

    def run():
        ns = (4, 8, 16, 32)
        counts = [prime_count(pure_field(n), 10) for n in ns]
        ratios = [Fraction(c, n) for c, n in zip(counts, ns)]
        ok = all(a >= b for a, b in zip(ratios, ratios[1:]))
        return ok, dict(counts=counts, ratios=[float(r) for r in ratios])

    return _timed(9, "prime escape", run, 10)


def c10_orbital(profile="full"):
    from .geom import compare_preset, preset_grid

    def run():
        grid = preset_grid()
        if profile != "full":
            grid = [p for p in grid if p.name in ("split_real_2", "split_real_4", "elliptic_pi/2", "split_complex_0+2i")]
        rows = [compare_preset(p) for p in grid]
        worst = max(r["rel_diff"] for r in rows)
        return worst <= 1e-3, dict(presets=len(rows), worst_rel_diff=worst)

    return _timed(10, "archimedean orbital integrals", run, 120)


def c11_nerve(profile="full"):
    from .nerve import run as nerve_run, space_preset

    def run():
        a = nerve_run(space_preset("torus2", samples=10_000, seed=7))
        b = nerve_run(space_preset("torus2", samples=10_000, seed=7))
        ok = (a["packing_violations"] == 0 and a["coverage"] == 1.0 and a["max_degree"] <= 36 and a == b)
        return ok, dict(centers=a["centers"], packing_violations=a["packing_violations"], coverage=a["coverage"],
                        max_degree=a["max_degree"], bound=a["degree_bound"], deterministic=a == b)

    return _timed(11, "nerve on the flat torus", run, 60)


def _random_sl2(rng, scale, complex_=False):
    X = rng.normal(size=(2, 2)) * scale
    if complex_:
        X = X + 1j * rng.normal(size=(2, 2)) * scale
    X = X - np.trace(X) / 2 * np.eye(2)
    return expm(X)


def metric_axioms(samples=1000, seed=0, scale=1.0, tol=1e-9):
    """Sampled identity, symmetry, left invariance and triangle inequality for the adjoint distance."""
    from .geom import frobenius_distance

    rng = np.random.default_rng(seed)
    bad = dict(identity=0, symmetry=0, left_invariance=0, triangle=0)
    worst_triangle = 0.0
    for _ in range(samples):
        x, y, z, h = (_random_sl2(rng, scale) for _ in range(4))
        dxy, dyx = frobenius_distance(x, y), frobenius_distance(y, x)
        dyz, dxz = frobenius_distance(y, z), frobenius_distance(x, z)
        bad["identity"] += frobenius_distance(x, x) > tol
        bad["symmetry"] += abs(dxy - dyx) > tol * max(1.0, dxy)
        bad["left_invariance"] += abs(frobenius_distance(h @ x, h @ y) - dxy) > 1e-7 * max(1.0, dxy)
        excess = dxz - dxy - dyz
        bad["triangle"] += excess > tol * max(1.0, dxz)
        worst_triangle = max(worst_triangle, excess)
    return bad, worst_triangle


def conjugation_invariance(samples=200, seed=1):
    from .geom import MobiusElement, class_invariants

    rng = np.random.default_rng(seed)
    worst = 0.0
    for k in range(samples):
        complex_ = k % 2 == 1
        g, h = _random_sl2(rng, 1.0, complex_), _random_sl2(rng, 1.0, complex_)
        field_ = "complex" if complex_ else "real"
        a = class_invariants(MobiusElement.of(g, field_))
        b = class_invariants(MobiusElement.of(h @ g @ np.linalg.inv(h), field_))
        c = class_invariants(MobiusElement.of(np.linalg.inv(g), field_))
        worst = max(worst, abs(a.lam - b.lam), abs(a.lam - c.lam),
                    abs(complex(a.weyl_disc) - complex(b.weyl_disc)))
    return worst


def zeta_monotonicity():
    from .numfield import dedekind_zeta, preset

    ok = True
    for name in ("Q", "Q(sqrt(-3))", "Q(2^(1/4))"):
        K = preset(name)
        partial = [dedekind_zeta(K, 2, X)[0] for X in (10, 100, 1000)]
        in_s = [dedekind_zeta(K, s, 1000)[0] for s in (2, 3, 4)]
        ok &= all(a < b for a, b in zip(partial, partial[1:])) and all(a > b for a, b in zip(in_s, in_s[1:]))
    return ok


def mahler_multiplicativity():
    from .mahler import mahler_measure
    from .numfield import LEHMER, cyclotomic, parse_poly

    polys = [LEHMER, parse_poly("x^2-3*x+1"), parse_poly("x^3-x-1"), cyclotomic(7), parse_poly("x^4-2")]
    worst = 0.0
    for i, f in enumerate(polys):
        for g in polys[i + 1:]:
            worst = max(worst, abs(mahler_measure(f * g) - mahler_measure(f) - mahler_measure(g)))
    return worst


def c12_properties(profile="full"):
    def run():
        bad, worst_tri = metric_axioms()
        conj = conjugation_invariance()
        zeta_ok = zeta_monotonicity()
        mult = mahler_multiplicativity()
        ok = all(v == 0 for v in bad.values()) and conj <= 1e-9 and zeta_ok and mult <= 1e-9
        return ok, dict(metric_violations=bad, worst_triangle_excess=worst_tri, conjugation_drift=conj,
                        zeta_monotone=zeta_ok, mahler_multiplicativity_error=mult)

    return _timed(12, "property suites", run)


CRITERIA = [c1_tree, c2_tree_weight, c3_repzeta, c4_measure_ratios, c5_nerve_constant, c6_covolume,
            c7_torus, c8_mahler, c9_prime_escape, c10_orbital, c11_nerve, c12_properties]


def run_all(profile="full"):
    if profile not in ("quick", "full"):
        raise ValueError(f"unknown profile {profile!r}; use quick or full")
    return [c(profile) for c in CRITERIA]
