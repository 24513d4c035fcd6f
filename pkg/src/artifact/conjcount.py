"""Ingredients of the conjugacy-class count: trace decay, almost-orthogonal embeddings, packing bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
import sympy

from . import config
from .mahler import mahler_measure
from .numfield import LEHMER, IntPolynomial, NumberField, cyclotomic, parse_poly, roots


def normalized_trace_exact(f) -> Fraction:
    f = parse_poly(f)
    if f.degree < 2:
        raise ValueError("degree must be at least 2")
    return Fraction(abs(f.coefficients[-2]), abs(f.leading) * f.degree)


def normalized_trace(f) -> float:
    """|sum of roots| / degree, read off the second coefficient."""
    return float(normalized_trace_exact(f))


def decay_shape(N):
    return math.sqrt(math.log(N) / N)


def trace_decay_sweep(family, mahler_cap=1.0):
    """Per-member (N, trace, shape, ratio) and a flag for members above the Mahler cap."""
    rows, flagged = [], []
    for f in family:
        f = parse_poly(f)
        m = mahler_measure(f)
        if m > mahler_cap:
            flagged.append(str(f))
        tr = normalized_trace(f)
        shape = decay_shape(f.degree)
        rows.append(dict(N=f.degree, trace=tr, shape=shape, ratio=tr / shape, mahler=m))
    ledger = dict(max_ratio=max((r["ratio"] for r in rows), default=0.0), unbounded_mahler=flagged)
    return rows, ledger


def cyclotomic_prime_family(pmax=101, pmin=5):
    return [cyclotomic(p) for p in sympy.primerange(pmin, pmax + 1)]


def pure_family(ns=(2, 4, 8, 16, 32)):
    return [IntPolynomial((-2,) + (0,) * (n - 1) + (1,)) for n in ns]


# --- Gram diagnostics ----------------------------------------------------------

def power_sum(f: IntPolynomial, k: int) -> Fraction:
    """Sum of k-th powers of the roots of monic f, by Newton's identities."""
    f = parse_poly(f)
    n = f.degree
    e = [Fraction(1)]
    lead = f.leading
    for i in range(1, n + 1):
        e.append(Fraction((-1) ** i * f.coefficients[n - i], lead))
    p = [Fraction(n)]
    for m in range(1, k + 1):
        s = Fraction((-1) ** (m - 1) * m) * e[m] if m <= n else Fraction(0)
        for i in range(1, min(m, n + 1)):
            s += (-1) ** (i - 1) * e[i] * p[m - i]
        p.append(s)
    return p[k]


def trace_polynomial(P) -> IntPolynomial:
    """Minimal polynomial of lambda + 1/lambda for a reciprocal polynomial P of lambda."""
    P = parse_poly(P)
    lam, y = sympy.symbols("lam y")
    res = sympy.resultant(P.to_sympy(lam).as_expr(), lam**2 - y * lam + 1, lam)
    factors = sympy.factor_list(res, y)[1]
    best = None
    for fac, _ in factors:
        # the factor of degree deg P / 2 vanishing at the trace of a root
        if sympy.degree(fac, y) * 2 == P.degree:
            best = fac
    if best is None:
        raise ValueError("polynomial is not reciprocal")
    coeffs = sympy.Poly(best, y).all_coeffs()[::-1]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return IntPolynomial(tuple(int(c) for c in coeffs))


@dataclass
class GramDiagnostics:
    vectors: np.ndarray  # one row per number, one column per place
    gram: np.ndarray
    off_diag_max: float
    diag_range: tuple
    expected_diag: list
    shape: float
    rank: int

    def as_dict(self):
        return dict(gram=self.gram.tolist(), off_diag_max=self.off_diag_max, diag_range=list(self.diag_range),
                    expected_diag=[float(x) for x in self.expected_diag], shape=self.shape, rank=self.rank)


class EmbeddingMismatchError(ValueError):
    pass


def _places(K: NumberField):
    """One root per archimedean place with its weight: 1 for real, 2 for complex."""
    out = []
    for r in roots(K.min_poly):
        if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-20):
            out.append((mpmath.re(r), 1))
        elif mpmath.im(r) > 0:
            out.append((r, 2))
    return out


def express_in_field(x_poly: IntPolynomial, K: NumberField, x_value):
    """Rational coefficients c with x = sum c_i beta^i, beta the field generator.

    Found by an integer relation at the first place and certified exactly:
    x_poly(sum c_i beta^i) must vanish modulo the minimal polynomial of beta.
    """
    n = K.min_poly.degree
    with mpmath.workdps(max(config.DPS, 60)):
        beta = _places(K)[0][0]
        vec = [x_value] + [beta**i for i in range(n)]
        rel = mpmath.pslq(vec, maxcoeff=10**8, maxsteps=10**5)
    if rel is None or rel[0] == 0:
        raise EmbeddingMismatchError("no rational expression in the field generator found")
    c = [Fraction(-rel[i + 1], rel[0]) for i in range(n)]
    b = sympy.symbols("b")
    expr = sum(sympy.Rational(ci.numerator, ci.denominator) * b**i for i, ci in enumerate(c))
    check = sympy.rem(sympy.expand(x_poly.to_sympy(b).as_expr().subs(b, expr)), K.min_poly.to_sympy(b).as_expr(), b)
    if check != 0:
        raise EmbeddingMismatchError("candidate expression is not a root of the trace polynomial")
    return c


def gram_diagnostics(polys, K: NumberField) -> GramDiagnostics:
    """Gram matrix of x = lambda + 1/lambda over the places of K, with <x, y> = tr(x y)/[K:Q]."""
    N = K.min_poly.degree
    places = _places(K)
    with mpmath.workdps(max(config.DPS, 60)):
        rows, expected = [], []
        for P in polys:
            P = parse_poly(P)
            xpoly = trace_polynomial(P)
            # pick the root of the trace polynomial that lies in K at the first place
            cands = [r for r in roots(xpoly) if abs(mpmath.im(r)) < 1e-20]
            coeffs = None
            for xv in sorted(cands, key=lambda r: -abs(r)):
                try:
                    coeffs = express_in_field(xpoly, K, mpmath.re(xv))
                    break
                except EmbeddingMismatchError:
                    continue
            if coeffs is None:
                raise EmbeddingMismatchError(f"lambda + 1/lambda for {P} does not lie in the field")
            rows.append([complex(sum(mpmath.mpf(ci.numerator) / ci.denominator * r**i for i, ci in enumerate(coeffs)))
                         for r, _ in places])
            expected.append(2 + power_sum(P, 2) / N)
    V = np.array(rows)
    w = np.array([wt for _, wt in places], dtype=float)
    gram = np.real((V * w) @ V.conj().T) / N
    diag = np.diag(gram)
    off = gram - np.diag(diag)
    return GramDiagnostics(V, gram, float(np.max(np.abs(off))) if len(polys) > 1 else 0.0,
                           (float(diag.min()), float(diag.max())), expected, decay_shape(N),
                           int(np.linalg.matrix_rank(gram, tol=1e-9 * max(1.0, float(np.abs(gram).max())))))


def power_polynomial(P, k: int) -> IntPolynomial:
    """Minimal polynomial of lambda^k from that of lambda (degree preserved for Salem numbers)."""
    P = parse_poly(P)
    lam, y = sympy.symbols("lam y")
    res = sympy.Poly(sympy.resultant(P.to_sympy(lam).as_expr(), y - lam**k, lam), y)
    fac = max(sympy.factor_list(res.as_expr(), y)[1], key=lambda t: sympy.degree(t[0], y))[0]
    coeffs = sympy.Poly(fac, y).all_coeffs()[::-1]
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    return IntPolynomial(tuple(int(c) for c in coeffs))


def salem_presets():
    """Lehmer's number and its square and cube, all over the trace field of the first."""
    K = NumberField(trace_polynomial(LEHMER), "lehmer trace field", True)
    return [LEHMER, power_polynomial(LEHMER, 2), power_polynomial(LEHMER, 3)], K


# --- packing bound -------------------------------------------------------------

def kl_packing_bound(n: int, A: float, C: float = 1.0) -> float:
    """(C n / A^2)^(C A^2) for unit vectors with pairwise |<v_i, v_j>| <= A / sqrt(n)."""
    if not 0.5 < A < math.sqrt(n) / 2:
        raise ValueError(f"A must lie in (1/2, sqrt(n)/2) = (0.5, {math.sqrt(n) / 2:.4g})")
    if C < 1:
        raise ValueError("C must be at least 1")
    return (C * n / A**2) ** (C * A**2)


def greedy_count(vectors, A: float) -> int:
    """Size of a greedily chosen subset whose pairwise normalized inner products are at most A / sqrt(n)."""
    V = np.asarray(vectors, dtype=float)
    V = V / np.linalg.norm(V, axis=1, keepdims=True)
    thr = A / math.sqrt(V.shape[1])
    chosen = []
    for v in V:
        if all(abs(float(v @ w)) <= thr for w in chosen):
            chosen.append(v)
    return len(chosen)


def calibrate_constant(n: int, A: float, samples: int = 2000, seed: int = 0, grid=(1.0, 1.25, 1.5, 2.0, 3.0)):
    """Smallest C on the grid for which the greedy count from random unit vectors is within the bound."""
    rng = np.random.default_rng(seed)
    count = greedy_count(rng.normal(size=(samples, n)), A)
    for C in grid:
        if count <= kl_packing_bound(n, A, C):
            return C, count
    return None, count
