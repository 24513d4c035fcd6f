"""Integer polynomials and number fields presented by a monic generator.

Primes are split by factoring the generator modulo p, which is only correct
when the monogenic order Z[x]/(f) is maximal at p.  Primes dividing the
polynomial discriminant therefore raise :class:`NonMaximalOrderError` unless
the field declares the order maximal there.
"""
from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import mpmath
import numpy as np
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor, gf_from_int_poly, gf_gcd, gf_mul, gf_quo

from . import config


class PolynomialParseError(ValueError):
    pass


class NonMaximalOrderError(ValueError):
    """p divides the polynomial discriminant and the order is not known to be maximal there."""


class PrecisionError(ArithmeticError):
    pass


class PrimeSkippedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with integer coefficients, lowest degree first."""

    coefficients: tuple

    def __post_init__(self):
        c = [int(a) for a in self.coefficients]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        if not c:
            c = [0]
        object.__setattr__(self, "coefficients", tuple(c))

    @classmethod
    def from_roots_of_unity(cls, m):
        return cyclotomic(m)

    @property
    def degree(self):
        if self.coefficients == (0,):
            return 0
        return len(self.coefficients) - 1

    @property
    def leading(self):
        return self.coefficients[-1]

    def is_monic(self):
        return self.leading == 1

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coefficients):
            acc = acc * x + a
        return acc

    def __mul__(self, other):
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def height(self):
        return max(abs(a) for a in self.coefficients)

    def high_first(self):
        return list(reversed(self.coefficients))

    def to_sympy(self, x=sympy.Symbol("x")):
        return sympy.Poly(self.high_first(), x, domain="ZZ")

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            a = self.coefficients[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(a) == 1:
                coeff = ""
            else:
                coeff = str(abs(a)) + ("*" if mono else "")
            sign = "-" if a < 0 else "+"
            terms.append((sign, coeff + mono))
        if not terms:
            return "0"
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, t in terms[1:]:
            s += f" {sign} {t}"
        return s


_LIST_RE = re.compile(r"^\s*\[(.*)\]\s*$")


def parse_poly(text) -> IntPolynomial:
    """Parse ``"x^4 - 2"`` or a coefficient list ``"[-2,0,0,0,1]"`` (lowest degree first)."""
    if isinstance(text, IntPolynomial):
        return text
    if isinstance(text, (list, tuple)):
        return IntPolynomial(tuple(int(a) for a in text))
    s = str(text).replace("−", "-").strip()
    m = _LIST_RE.match(s)
    if m:
        try:
            return IntPolynomial(tuple(int(a) for a in m.group(1).split(",") if a.strip()))
        except ValueError as exc:
            raise PolynomialParseError(f"bad coefficient list: {text!r}") from exc
    if not s or not re.fullmatch(r"[0-9x\s\^\*\+\-\(\)]+", s):
        raise PolynomialParseError(f"cannot parse polynomial: {text!r}")
    x = sympy.Symbol("x")
    try:
        expr = sympy.sympify(s.replace("^", "**"), locals={"x": x})
        poly = sympy.Poly(expr, x)
    except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as exc:
        raise PolynomialParseError(f"cannot parse polynomial: {text!r}") from exc
    if poly.domain != ZZ and not all(c.is_integer for c in poly.all_coeffs()):
        raise PolynomialParseError(f"non-integer coefficients: {text!r}")
    return IntPolynomial(tuple(int(c) for c in reversed(poly.all_coeffs())))


def poly_discriminant(f: IntPolynomial) -> int:
    """Discriminant (-1)^(n(n-1)/2) Res(f, f') of a monic polynomial."""
    if not f.is_monic():
        raise ValueError("poly_discriminant needs a monic polynomial")
    if f.degree < 1:
        raise ValueError("degree must be at least 1")
    if f.degree == 1:
        return 1
    g = f.to_sympy()
    n = f.degree
    res = sympy.resultant(g, g.diff(), g.gen)
    return int((-1) ** (n * (n - 1) // 2) * res)


def _weierstrass(f, seeds, target, maxiter=60):
    """Simultaneous (Weierstrass / Durand-Kerner) refinement of all roots at once."""
    a = [mpmath.mpf(c) for c in f.high_first()]
    z = [mpmath.mpc(complex(s)) for s in seeds]
    n = len(z)
    for _ in range(maxiter):
        worst = 0
        for i in range(n):
            num = mpmath.polyval(a, z[i])
            den = mpmath.mpf(1)
            zi = z[i]
            for j in range(n):
                if j != i:
                    den *= zi - z[j]
            if den == 0:
                return None
            step = num / den
            z[i] = zi - step
            worst = max(worst, abs(num))
        if worst < target:
            return z
    return None


def _separated(rts):
    pts = np.array([complex(r) for r in rts])
    gaps = np.abs(pts[:, None] - pts[None, :]) + np.eye(len(pts))
    return bool(gaps.min() > 1e-12)


@lru_cache(maxsize=256)
def _roots(coeffs, dps):
    f = IntPolynomial(coeffs)
    target = config.ROOT_RESIDUAL * f.height()
    with mpmath.workdps(dps):
        seeds = np.roots(np.array(f.high_first(), dtype=float))
        if np.all(np.isfinite(seeds)):
            rts = _weierstrass(f, seeds, target)
            if rts is not None and _separated(rts):
                return tuple(rts)
        for extra in (10, 40, 120):
            try:
                rts = mpmath.polyroots(f.high_first(), maxsteps=400, extraprec=extra * 4)
            except mpmath.libmp.NoConvergence:
                continue
            if all(abs(mpmath.polyval(f.high_first(), r)) < target for r in rts):
                return tuple(rts)
    raise PrecisionError(f"root refinement did not converge for {f}")


def roots(f: IntPolynomial, dps=None):
    """All complex roots, refined until the residual is below the configured tolerance."""
    if f.degree < 1:
        return ()
    return _roots(f.coefficients, dps or config.DPS)


def signature(f: IntPolynomial):
    rts = roots(f)
    tol = mpmath.mpf(10) ** (-(config.DPS // 2))
    r1 = 0
    for r in rts:
        if abs(mpmath.im(r)) < tol:
            r1 += 1
    r2, rem = divmod(f.degree - r1, 2)
    if rem:
        raise PrecisionError("could not separate real and complex roots")
    return r1, r2


# --- factorization modulo p -------------------------------------------------

def factor_mod_p(f: IntPolynomial, p: int):
    """Factor f mod p into (irreducible factor, exponent) pairs; factors high degree first."""
    g = gf_from_int_poly(f.high_first(), p)
    _, facs = gf_factor(g, p, ZZ)
    return [([int(c) for c in h], e) for h, e in facs]


def irreducible_mod_some_prime(f: IntPolynomial, primes=range(2, 200)):
    """A prime modulo which f stays irreducible, which certifies irreducibility over Q."""
    for p in sympy.primerange(2, max(primes) + 1):
        if f.leading % p == 0:
            continue
        facs = factor_mod_p(f, p)
        if len(facs) == 1 and facs[0][1] == 1 and len(facs[0][0]) - 1 == f.degree:
            return p
    return None


def dedekind_p_maximal(f: IntPolynomial, p: int) -> bool:
    """Dedekind's criterion: is Z[x]/(f) maximal at p?"""
    facs = factor_mod_p(f, p)
    fp = gf_from_int_poly(f.high_first(), p)
    rad = [1]
    for h, _ in facs:
        rad = gf_mul(rad, h, p, ZZ)
    cof = gf_quo(fp, rad, p, ZZ)
    # lift rad and cof to Z with coefficients in [0, p), then F = (rad*cof - f)/p
    prod = sympy.Poly(rad, sympy.Symbol("x")) * sympy.Poly(cof, sympy.Symbol("x"))
    diff = prod - f.to_sympy()
    big = [int(c) for c in diff.all_coeffs()]
    assert all(c % p == 0 for c in big)
    F = gf_from_int_poly([c // p for c in big], p)
    g = gf_gcd(gf_gcd(F, rad, p, ZZ), cof, p, ZZ)
    return len(g) <= 1


@dataclass(frozen=True)
class PrimeSplitting:
    p: int
    factors: tuple  # (residue_degree, ramification_index)

    @property
    def norms(self):
        return tuple(self.p ** f for f, _ in self.factors)

    def degree(self):
        return sum(f * e for f, e in self.factors)


@dataclass(frozen=True)
class NumberField:
    """Field Q[x]/(min_poly).

    ``maximal_at`` lists primes dividing the polynomial discriminant at which
    the monogenic order is nevertheless known to be maximal; ``True`` means
    the order is the full ring of integers.
    """

    min_poly: IntPolynomial
    name: str = ""
    maximal_at: object = field(default=frozenset())

    def __post_init__(self):
        if not self.min_poly.is_monic():
            raise ValueError("defining polynomial must be monic")
        if self.poly_discriminant == 0:
            raise ValueError("defining polynomial is not squarefree")

    @property
    def degree(self):
        return self.min_poly.degree

    @cached_property
    def poly_discriminant(self):
        return poly_discriminant(self.min_poly)

    @cached_property
    def signature(self):
        return signature(self.min_poly)

    @property
    def embeddings(self):
        return roots(self.min_poly)

    def order_is_maximal_at(self, p):
        if self.maximal_at is True:
            return True
        return self.poly_discriminant % p != 0 or p in self.maximal_at

    def __str__(self):
        return self.name or f"Q[x]/({self.min_poly})"


def prime_splitting(K: NumberField, p: int) -> PrimeSplitting:
    p = int(p)
    if not sympy.isprime(p):
        raise ValueError(f"{p} is not prime")
    if not K.order_is_maximal_at(p):
        raise NonMaximalOrderError(
            f"p={p} divides the discriminant {K.poly_discriminant} of {K}: possibly non-maximal order"
        )
    if K.degree == 1:
        return PrimeSplitting(p, ((1, 1),))
    facs = factor_mod_p(K.min_poly, p)
    out = tuple(sorted((len(h) - 1, e) for h, e in facs))
    split = PrimeSplitting(p, out)
    assert split.degree() == K.degree
    return split


def prime_count(K: NumberField, x) -> int:
    """Number of prime ideals of norm at most x.  Skipped primes raise a warning."""
    if x < 2:
        raise ValueError("x must be at least 2")
    count = 0
    for p in sympy.primerange(2, int(math.floor(x)) + 1):
        try:
            split = prime_splitting(K, p)
        except NonMaximalOrderError as exc:
            warnings.warn(str(exc), PrimeSkippedWarning, stacklevel=2)
            continue
        count += sum(1 for n in split.norms if n <= x)
    return count


def _log_tail(n, s, X):
    """n * sum_{m > X} -log(1 - m^-s), an upper bound for the omitted Euler factors."""
    total = mpmath.mpf(0)
    k = 1
    while True:
        term = mpmath.zeta(k * s, int(X) + 1) / k
        total += term
        if term < mpmath.mpf(10) ** (-mpmath.mp.dps) * total or k > 200:
            break
        k += 1
    return n * total


def dedekind_zeta(K: NumberField, s, X):
    """Truncated Euler product over prime ideals of norm <= X.

    Returns ``(value, tail_bound)`` with ``value <= zeta_K(s) <= value + tail_bound``.
    The bound uses that at most n prime ideals share any given norm.
    """
    if s <= 1:
        raise ValueError("s must exceed 1")
    if X < 2:
        raise ValueError("cutoff must be at least 2")
    with mpmath.workdps(30):
        s = mpmath.mpf(s)
        logv = mpmath.mpf(0)
        for p in sympy.primerange(2, int(X) + 1):
            for N in prime_splitting(K, p).norms:
                if N <= X:
                    logv -= mpmath.log1p(-mpmath.power(N, -s))
        value = mpmath.exp(logv)
        L = _log_tail(K.degree, s, X)
        tail = value * mpmath.expm1(L)
        return value, tail


# --- quadratic characters --------------------------------------------------

def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return sympy.ntheory.factor_.core(abs(d)) == abs(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and sympy.ntheory.factor_.core(abs(m)) == abs(m)
    return False


def kronecker(d: int, m: int) -> int:
    """Kronecker symbol (d/m) for m >= 1."""
    if m == 0:
        return 1 if abs(d) == 1 else 0
    out = 1
    while m % 2 == 0:
        m //= 2
        if d % 2 == 0:
            return 0
        out *= 1 if d % 8 in (1, 7) else -1
    if m == 1:
        return out
    return out * sympy.jacobi_symbol(d % m, m)


def dirichlet_L_quadratic(d: int, N: int = 10**4):
    """Partial sum of L(1, chi_d).  Returns ``(value, error_bound)``.

    Partial character sums over any interval are at most |d|/2 in size, so by
    summation by parts the tail beyond N is at most (|d|/2)/(N+1).
    """
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if N < 1000:
        raise ValueError("need N >= 1000")
    period = [kronecker(d, m) for m in range(abs(d))]
    total = math.fsum(period[m % abs(d)] / m for m in range(1, N + 1))
    return total, (abs(d) / 2) / (N + 1)


def discriminant_lower_bound(n: int, r2: int, flavor="minkowski"):
    if n < 1 or r2 < 0 or 2 * r2 > n:
        raise ValueError("need n >= 1 and 0 <= 2 r2 <= n")
    if flavor == "minkowski":
        return (n**n / math.factorial(n) * (math.pi / 4) ** r2) ** 2
    if flavor == "odlyzko60":
        return 60.0**n
    raise ValueError(f"unknown flavor {flavor!r}")


# --- presets ----------------------------------------------------------------

LEHMER = IntPolynomial((1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1))


def cyclotomic(m: int) -> IntPolynomial:
    c = sympy.Poly(sympy.cyclotomic_poly(m, sympy.Symbol("x")))
    return IntPolynomial(tuple(int(a) for a in reversed(c.all_coeffs())))


def pure_field(n: int, a: int = 2) -> NumberField:
    """Q(a^(1/n)) for squarefree a; the order Z[a^(1/n)] is maximal iff a^p != a mod p^2 for p | n."""
    f = IntPolynomial((-a,) + (0,) * (n - 1) + (1,))
    primes = sympy.primefactors(f.to_sympy().discriminant())
    maximal = frozenset(int(p) for p in primes if dedekind_p_maximal(f, p))
    return NumberField(f, f"Q({a}^(1/{n}))", maximal)


def cyclotomic_field(m: int) -> NumberField:
    return NumberField(cyclotomic(m), f"Q(zeta_{m})", True)


def quadratic_field(d: int) -> NumberField:
    """Q(sqrt d) for a fundamental discriminant d, via its monogenic maximal order."""
    if not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    if d % 4 == 1:
        f = IntPolynomial(((1 - d) // 4, -1, 1))
    else:
        f = IntPolynomial((-(d // 4), 0, 1))
    return NumberField(f, f"Q(sqrt({d}))", True)


def rationals() -> NumberField:
    return NumberField(IntPolynomial((-1, 1)), "Q", True)


def lehmer_field() -> NumberField:
    primes = sympy.primefactors(poly_discriminant(LEHMER))
    return NumberField(LEHMER, "Q(lehmer)", frozenset(int(p) for p in primes if dedekind_p_maximal(LEHMER, p)))


def preset(name: str) -> NumberField:
    name = name.strip()
    if name == "Q":
        return rationals()
    if name == "lehmer":
        return lehmer_field()
    m = re.fullmatch(r"Q\((-?\d+)\^\(1/(\d+)\)\)", name)
    if m:
        return pure_field(int(m.group(2)), int(m.group(1)))
    m = re.fullmatch(r"Q\(zeta_(\d+)\)", name)
    if m:
        return cyclotomic_field(int(m.group(1)))
    m = re.fullmatch(r"Q\(sqrt\((-?\d+)\)\)", name)
    if m:
        d = int(m.group(1))
        if not is_fundamental_discriminant(d):
            d = 4 * d
        return quadratic_field(d)
    raise ValueError(f"unknown field preset {name!r}")
