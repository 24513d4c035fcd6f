"""Representation degrees of SL(2, Z_p) and related dimension bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy


@dataclass
class DegreeMultiset:
    level: int
    entries: list = field(default_factory=list)  # (dimension, multiplicity)

    def finalize(self):
        out = []
        for dim, mult in self.entries:
            dim, mult = Fraction(dim), Fraction(mult)
            if dim.denominator != 1 or mult.denominator != 1 or dim <= 0 or mult < 0:
                raise ValueError(f"non-integral entry {dim} x {mult} at level {self.level}")
            if mult:
                out.append((int(dim), int(mult)))
        self.entries = out
        return self

    def count(self):
        return sum(m for _, m in self.entries)

    def sum_of_squares(self):
        return sum(m * d * d for d, m in self.entries)

    def zeta(self, s):
        return sum(m * d ** (-s) for d, m in self.entries)

    def as_dict(self):
        return {"level": self.level, "entries": [{"dim": d, "mult": m} for d, m in self.entries]}


def _check_odd_prime(q):
    if q % 2 == 0:
        raise ValueError("the degree formula needs odd q")
    if not sympy.isprime(q):
        raise ValueError("q must be an odd prime")


def jz_level_multiset(q: int, n: int) -> DegreeMultiset:
    """Degrees and multiplicities of irreducible representations of SL(2, Z/q^n) of level exactly n."""
    _check_odd_prime(q)
    if n < 1:
        raise ValueError("level must be at least 1")
    q = Fraction(q)
    if n == 1:
        entries = [
            (1, 1),
            (q, 1),
            (q + 1, (q - 3) / 2),
            ((q + 1) / 2, 2),
            (q - 1, (q - 1) / 2),
            ((q - 1) / 2, 2),
        ]
    else:
        k = q ** (n - 2)
        entries = [
            ((q * q - 1) / 2 * k, 4 * q * k),
            ((q * q - q) * k, (q * q - 1) / 2 * k),
            ((q * q + q) * k, (q - 1) ** 2 / 2 * k),
        ]
    return DegreeMultiset(n, entries).finalize()


def sl2_group_order(q: int, n: int) -> int:
    if n < 1:
        raise ValueError("level must be at least 1")
    return q ** (3 * n - 2) * (q * q - 1)


def sum_of_squares_check(q: int, n: int):
    """Compare the sum of squared degrees up to level n with |SL(2, Z/q^n)|."""
    ledger = []
    total = 0
    for lev in range(1, n + 1):
        contrib = jz_level_multiset(q, lev).sum_of_squares()
        total += contrib
        want = sl2_group_order(q, lev)
        ledger.append({"level": lev, "contribution": contrib, "cumulative": total, "group_order": want, "diff": total - want})
    ok = all(row["diff"] == 0 for row in ledger)
    return ok, ledger


def carayol_dim(q: int, c: int) -> int:
    if c < 2:
        raise ValueError("minimal level must be at least 2")
    r = math.gcd(2, c)
    val = Fraction(r * (q * q - 1), q**r - 1) * Fraction(q) ** Fraction(c + r - 4, 2)
    # (c + r - 4) is even, so the power of q is an integer power
    if val.denominator != 1:
        raise ValueError(f"non-integral dimension {val} for q={q}, c={c}")
    return int(val)


LOCAL_TYPES = ("pgl_vertex", "pgl_edge", "ramified")


def min_dim_bound(local_type: str, q: int):
    """(threshold, floor): irreducible representations of dimension above threshold have dimension >= floor."""
    if local_type == "pgl_vertex":
        return 1, q - 1
    if local_type == "pgl_edge":
        return 2, q - 1
    if local_type == "ramified":
        return 2, q + 1
    raise ValueError(f"unknown local type {local_type!r}")


def special_zeta_local_bound(local_type: str, q: int) -> Fraction:
    base = 1 / (1 - Fraction(1, q * q))
    if local_type == "pgl_vertex":
        return base
    if local_type in ("pgl_edge", "ramified"):
        return base * (1 + q)
    raise ValueError(f"unknown local type {local_type!r}")


def special_zeta_global_bound(zeta_k_2, edge_norms):
    """zeta_k(2) times the product of (N + 1) over the edge-stabilizer places."""
    out = zeta_k_2
    for N in edge_norms:
        out *= N + 1
    return out
