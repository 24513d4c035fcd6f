"""Mahler measures, Kronecker/Salem classification and equidistribution of conjugates."""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from . import config
from .numfield import IntPolynomial, PrecisionError, cyclotomic, parse_poly, roots


class ToleranceAmbiguityError(PrecisionError):
    """A root lies too close to the unit circle to classify."""


@dataclass(frozen=True)
class RootMeasure:
    angles: tuple
    radii: tuple

    @property
    def degree(self):
        return len(self.angles)

    @classmethod
    def of(cls, f):
        rts = roots(parse_poly(f))
        return cls(tuple(float(mpmath.arg(r)) for r in rts), tuple(float(abs(r)) for r in rts))


def _check_input(f):
    if not f.is_monic():
        raise ValueError("expected a monic polynomial")
    if f.coefficients[0] == 0:
        raise ValueError("expected a nonzero constant term")


def mahler_measure(f) -> float:
    """Logarithmic Mahler measure sum(log+ |root|) of a monic integer polynomial."""
    f = parse_poly(f)
    _check_input(f)
    total = mpmath.mpf(0)
    for r in roots(f):
        a = abs(r)
        if abs(a - 1) < config.UNIT_CIRCLE_TOL:
            continue
        if a > 1:
            total += mpmath.log(a)
    return float(total)


def _census(f):
    inside = outside = on = 0
    for r in roots(f):
        gap = abs(r) - 1
        if abs(gap) < config.UNIT_CIRCLE_TOL:
            on += 1
        elif abs(gap) < 1e3 * config.UNIT_CIRCLE_TOL:
            raise ToleranceAmbiguityError(f"root of modulus {abs(r)} is too close to the unit circle")
        elif gap > 0:
            outside += 1
        else:
            inside += 1
    return inside, on, outside


def classify(f) -> str:
    f = parse_poly(f)
    _check_input(f)
    inside, on, outside = _census(f)
    if inside == outside == 0:
        return "kronecker"
    if inside == outside == 1:
        return "salem_like"
    return "other"


def norm_one_minus(f) -> int:
    """f(1) for monic f.

    N(1 - alpha) = prod(1 - root) = f(1), since f is monic; the value is the
    norm itself, with no extra sign.
    """
    f = parse_poly(f)
    if not f.is_monic():
        raise ValueError("expected a monic polynomial")
    return f(1)


def bilu_discrepancy(m: RootMeasure) -> float:
    """Star discrepancy of the angles (as fractions of a full turn) against uniform."""
    if m.degree < 1:
        raise ValueError("empty measure")
    xs = sorted((a / (2 * math.pi)) % 1.0 for a in m.angles)
    n = len(xs)
    return max(max((i + 1) / n - x, x - i / n) for i, x in enumerate(xs))


def test_function_averages(m: RootMeasure, kmax=4):
    """Averages of cos(k theta), sin(k theta) over the measure; all vanish on the circle."""
    n = m.degree
    out = {}
    for k in range(1, kmax + 1):
        out[f"cos{k}"] = math.fsum(math.cos(k * a) for a in m.angles) / n
        out[f"sin{k}"] = math.fsum(math.sin(k * a) for a in m.angles) / n
    return out


def dobrowolski_floor(d: int) -> float:
    if d < 3:
        raise ValueError("d must be at least 3")
    return (math.log(math.log(d)) / math.log(d)) ** 3


def pure_power(n: int, a: int = 2) -> IntPolynomial:
    return IntPolynomial((-a,) + (0,) * (n - 1) + (1,))


def family_sweep(indices, generator=pure_power):
    """Rows (n, degree, mahler, discrepancy, norm_one_minus) for a family of polynomials."""
    rows = []
    for n in indices:
        f = generator(n)
        rows.append(
            dict(
                n=n,
                degree=f.degree,
                mahler=mahler_measure(f),
                discrepancy=bilu_discrepancy(RootMeasure.of(f)),
                norm_one_minus=norm_one_minus(f),
            )
        )
    return rows


__all__ = [
    "RootMeasure",
    "ToleranceAmbiguityError",
    "bilu_discrepancy",
    "classify",
    "cyclotomic",
    "dobrowolski_floor",
    "family_sweep",
    "mahler_measure",
    "norm_one_minus",
    "pure_power",
    "test_function_averages",
]
