"""The Bruhat-Tits tree of PGL(2, Q_p).

A vertex ``(m, b)`` is the homothety class of the lattice spanned by the
columns of ``[[p^m, b], [0, 1]]``.  The label ``b`` lives in Z[1/p] and is
reduced into ``[0, p^m)``; two labels give the same vertex iff they agree
modulo p^m Z_p.  The standard apartment (the one of the diagonal torus) is
``{(k, 0) : k in Z}`` and the base vertex is ``(0, 0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


INF = 10**9


def vp(x, p) -> int:
    """p-adic valuation of an integer or Fraction (INF for zero)."""
    x = Fraction(x)
    if x == 0:
        return INF
    n, d, v = x.numerator, x.denominator, 0
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def reduce_label(b, m, p) -> Fraction:
    """Canonical representative of b + p^m Z_p inside Z[1/p] ∩ [0, p^m)."""
    b = Fraction(b)
    n, d = b.numerator, b.denominator
    s = 0
    while d % p == 0:
        d //= p
        s += 1
    # b = n / (d p^s) with p not dividing d; p^s b = n/d is a p-adic integer
    e = m + s
    if e <= 0:
        return Fraction(0)
    mod = p**e
    c = (n * pow(d, -1, mod)) % mod
    return Fraction(c, p**s)


@dataclass(frozen=True, order=True)
class TreeVertex:
    m: int
    b: Fraction

    @classmethod
    def make(cls, m, b, p):
        return cls(int(m), reduce_label(b, m, p))

    def __repr__(self):
        return f"({self.m}, {self.b})"


BASE = TreeVertex(0, Fraction(0))


@dataclass(frozen=True)
class GL2Rational:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self):
        for k in "abcd":
            object.__setattr__(self, k, Fraction(getattr(self, k)))
        if self.det == 0:
            raise ValueError("singular matrix")

    @classmethod
    def parse(cls, text):
        """``"a,b;c,d"`` with integer or rational entries."""
        rows = [r.split(",") for r in text.split(";")]
        if len(rows) != 2 or any(len(r) != 2 for r in rows):
            raise ValueError(f"expected 'a,b;c,d', got {text!r}")
        (a, b), (c, d) = rows
        return cls(*(Fraction(x.strip()) for x in (a, b, c, d)))

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def __matmul__(self, o):
        return GL2Rational(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def weyl_discriminant(self):
        """Delta = 2 - lambda - 1/lambda = (4 det - tr^2)/det, for the eigenvalue ratio lambda."""
        return (4 * self.det - self.trace**2) / self.det

    def integral_scaled(self):
        """An integer matrix in the same projective class."""
        den = math.lcm(*(x.denominator for x in (self.a, self.b, self.c, self.d)))
        return tuple(int(x * den) for x in (self.a, self.b, self.c, self.d))


def neighbors(v: TreeVertex, p: int):
    p_m = Fraction(p) ** v.m
    kids = [TreeVertex.make(v.m + 1, v.b + t * p_m, p) for t in range(p)]
    return kids + [TreeVertex.make(v.m - 1, v.b, p)]


def distance(v: TreeVertex, w: TreeVertex, p: int) -> int:
    k = min(v.m, w.m, vp(v.b - w.b, p))
    return (v.m - k) + (w.m - k)


def apartment_distance(v: TreeVertex, p: int) -> int:
    """Distance to the standard apartment; the projection is (min(m, v(b)), 0)."""
    return max(0, v.m - vp(v.b, p))


def act(g: GL2Rational, v: TreeVertex, p: int) -> TreeVertex:
    """g applied to the lattice class of v, reduced by column operations over Z_p."""
    pm = Fraction(p) ** v.m
    x1, x2 = g.a * pm, g.a * v.b + g.b
    y1, y2 = g.c * pm, g.c * v.b + g.d
    if vp(y1, p) < vp(y2, p):
        x1, x2, y1, y2 = x2, x1, y2, y1
    # now v(y2) <= v(y1), so y1/y2 is a p-adic integer
    r = y1 / y2
    x1 -= r * x2
    top = x1 / y2
    label = x2 / y2
    return TreeVertex.make(vp(top, p), label, p)


def ball(p: int, radius: int, center: TreeVertex = BASE):
    """All vertices within the given distance of center, by breadth-first search."""
    seen = {center}
    frontier = [center]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in neighbors(v, p):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


# --- vectorized enumeration of the ball around the base vertex --------------

def _ball_arrays(p, radius):
    """Ball around the base as arrays (m, B, s) with label b = B / p^s.

    A vertex meets the base's ray to infinity at level k <= 0 and then descends
    L = m - k steps; its distance to the base is L - k.
    """
    ms, Bs, ss = [], [], []
    for k in range(-radius, 1):
        for L in range(0, radius + k + 1):
            if L == 0:
                D = np.zeros(1, dtype=np.int64)
            else:
                first = np.arange(p, dtype=np.int64) if k == 0 else np.arange(1, p, dtype=np.int64)
                rest = np.arange(p ** (L - 1), dtype=np.int64)
                # digit t_0 in the lowest place, the rest above it
                D = (first[None, :] + p * rest[:, None]).ravel()
            ms.append(np.full(D.shape, k + L, dtype=np.int64))
            Bs.append(D)
            ss.append(np.full(D.shape, -k, dtype=np.int64))
    return np.concatenate(ms), np.concatenate(Bs), np.concatenate(ss)


def _val(x, p):
    """Valuations of an integer array (zero maps to INF).

    For int64 input every nonzero entry is below 2^60 < p^cap, so the gcd with
    p^cap is exactly p^v(x).
    """
    if x.dtype == object:
        return np.array([vp(int(t), p) for t in x], dtype=np.int64)
    cap = int(62 / math.log2(p))
    g = np.gcd(x, np.int64(p**cap))
    out = np.rint(np.log(g.astype(float)) / math.log(p)).astype(np.int64)
    out[x == 0] = INF
    return out


def _displacement(g, p, m, B, s):
    """d(v, g v) for every vertex v = (m, B/p^s) of the arrays.

    With M = [[p^m, b], [0, 1]] the matrix h = M^-1 g M equals
    [[a - bc, (beta + (a - d) b - c b^2)/p^m], [c p^m, cb + d]], and the
    distance from the lattice to its image is v(det h) - 2 min v(h_ij).
    """
    a, beta, c, d = g.integral_scaled()
    vdet = vp(a * d - beta * c, p)
    ps_f = float(p) ** s
    Bf = B.astype(float)
    bound = (abs(beta) * ps_f**2 + abs(a - d) * Bf * ps_f + abs(c) * Bf**2 + (abs(a) + abs(c) + abs(d)) * (Bf + ps_f)).max()
    dtype = np.int64 if bound < 2**60 else object
    B = B.astype(dtype)
    ps = np.array([p**int(k) for k in range(int(s.max()) + 1)], dtype=dtype)[s]
    v11 = _val(a * ps - c * B, p) - s
    v12 = _val(beta * ps * ps + (a - d) * B * ps - c * B * B, p) - 2 * s - m
    v21 = np.full(m.shape, vp(c, p), dtype=np.int64) + m
    v22 = _val(c * B + d * ps, p) - s
    mins = np.minimum(np.minimum(v11, v12), np.minimum(v21, v22))
    return vdet - 2 * mins


@dataclass
class FixedSet:
    p: int
    radius: int
    vertices: list
    edges: list  # pairs (v, w) with both endpoints fixed
    flipped: list  # edges whose endpoints are exchanged

    @property
    def all_edges(self):
        return self.edges + self.flipped


def fixed_set_bruteforce(g: GL2Rational, p: int, radius: int) -> FixedSet:
    """Every vertex and edge in the ball of the given radius around the base that g fixes."""
    if radius > 12:
        raise ValueError("radius above 12 is refused")
    m, B, s = _ball_arrays(p, radius)
    disp = _displacement(g, p, m, B, s)
    fix = disp == 0
    verts = [TreeVertex.make(int(mm), Fraction(int(bb), p ** int(ss)), p) for mm, bb, ss in zip(m[fix], B[fix], s[fix])]
    vset = set(verts)
    edges = []
    for v in verts:
        par = TreeVertex.make(v.m - 1, v.b, p)
        if par in vset:
            edges.append((par, v))
    flipped = []
    # an endpoint of a flipped edge is moved by exactly one step
    cand = disp == 1
    for mm, bb, ss in zip(m[cand], B[cand], s[cand]):
        v = TreeVertex.make(int(mm), Fraction(int(bb), p ** int(ss)), p)
        w = act(g, v, p)
        if act(g, w, p) == v and distance(w, BASE, p) <= radius:
            e = tuple(sorted((v, w)))
            if e not in flipped:
                flipped.append(e)
    return FixedSet(p, radius, sorted(verts), sorted(edges), sorted(flipped))


# --- geometric description of fixed sets -----------------------------------

def center_of(vertices, p):
    """Center of a finite subtree by repeatedly stripping leaves: one vertex or an edge."""
    live = set(vertices)
    while len(live) > 2:
        leaves = [v for v in live if sum(w in live for w in neighbors(v, p)) <= 1]
        if not leaves:
            raise ValueError("vertex set is not a finite tree")
        live -= set(leaves)
    return sorted(live)


def neighbourhood_in_ball(core, r, p, radius):
    """Vertices within distance r of the set core, restricted to the ball around the base."""
    out = set()
    for x in core:
        out |= {v for v in ball(p, r, x) if distance(v, BASE, p) <= radius}
    return out


def is_connected(vertices, p):
    vertices = set(vertices)
    if not vertices:
        return True
    start = next(iter(vertices))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for w in neighbors(v, p):
            if w in vertices and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vertices


def strip_in_ball(p, radius, r):
    """Vertices of the ball around the base within distance r of the standard apartment."""
    m, B, s = _ball_arrays(p, radius)
    near = np.maximum(0, m - (_val(B, p) - s)) <= r
    return {TreeVertex.make(int(mm), Fraction(int(bb), p ** int(ss)), p) for mm, bb, ss in zip(m[near], B[near], s[near])}


def split_transversal_counts(fs: FixedSet):
    """Fixed vertices and edges modulo translation along the standard apartment.

    A fundamental domain is the fibre over (0, 0) of the projection to the
    apartment; an edge is assigned to the lower of its endpoints' projections.
    """
    p = fs.p

    def proj(v):
        return min(v.m, vp(v.b, p))

    nv = sum(1 for v in fs.vertices if proj(v) == 0)
    ne = sum(1 for e in fs.all_edges if min(proj(e[0]), proj(e[1])) == 0)
    return nv, ne


# --- closed forms ------------------------------------------------------------

TORUS_TYPES = ("split", "unramified", "tamely_ramified")


@dataclass(frozen=True)
class LocalClassData:
    q: int
    v_delta: int
    torus_type: str
    stabilizer_kind: str = "vertex"

    def __post_init__(self):
        if self.torus_type == "wildly_ramified":
            raise NotImplementedError("the wildly ramified case is not supported")
        if self.torus_type not in TORUS_TYPES:
            raise ValueError(f"unknown torus type {self.torus_type!r}")
        if self.stabilizer_kind not in ("vertex", "edge"):
            raise ValueError(f"unknown stabilizer kind {self.stabilizer_kind!r}")
        if self.torus_type == "tamely_ramified" and self.q % 2 == 0:
            raise NotImplementedError("ramified tori with even q are wildly ramified")


def fixed_count_closed_form(c: LocalClassData) -> Fraction:
    """Number of fixed vertices (or edges), counted modulo the non-compact part of the torus.

    split: a strip of radius v/2 about an apartment; q^(v/2) per translation period.
    unramified: a ball of radius v/2 about a vertex.
    tamely ramified: v(Delta) is 0 or odd, the fixed set is the ball of radius
    (v-1)/2 about an edge; for v = 0 only that edge is fixed, flipped.
    An empty fixed set is returned when v(Delta) < 0.
    """
    q, v = c.q, c.v_delta
    if v < 0:
        return Fraction(0)
    if c.torus_type == "split":
        if v % 2:
            raise ValueError("split tori have even v(Delta)")
        return Fraction(q ** (v // 2))
    if c.torus_type == "unramified":
        if v % 2:
            raise ValueError("unramified tori have even v(Delta)")
        r = v // 2
        n = q**r + Fraction(2 * (q**r - 1), q - 1)
        return n - 1 if c.stabilizer_kind == "edge" else n
    if v != 0 and v % 2 == 0:
        raise ValueError("tamely ramified tori have v(Delta) = 0 or odd")
    nverts = Fraction(2 * (q ** ((v + 1) // 2) - 1), q - 1)
    if c.stabilizer_kind == "vertex":
        return nverts
    return nverts - 1 if v else Fraction(1)


def tame_count_unscaled(q, v):
    """2(q^(v/2) - q^(-1/2)) / (q^(3/2) - q^(1/2)): the tame count divided by q."""
    return 2 * (q ** (v / 2) - q ** -0.5) / (q**1.5 - q**0.5)


def orbital_integral_unit(c: LocalClassData, anisotropic=False):
    """Orbital integral of the unit-group indicator, with the accompanying upper bound.

    Returns ``(value, bound)`` where bound = q^(v/2) (1 + b/(q - 1)), b = 0 for
    split centralizers and 2 otherwise.
    """
    if anisotropic:
        return Fraction(1), 1.0
    value = fixed_count_closed_form(c)
    b = 0 if c.torus_type == "split" else 2
    bound = c.q ** (c.v_delta / 2) * (1 + b / (c.q - 1))
    return value, bound


def tree_weight_partial_sum(p: int, n: int) -> Fraction:
    """1 + (q+1) sum_{k=1..n} q^(-k-1)."""
    q = Fraction(p)
    return 1 + (q + 1) * sum((q ** (-k - 1) for k in range(1, n + 1)), Fraction(0))


def tree_weight_limit(p: int) -> Fraction:
    q = Fraction(p)
    return (1 + q**-2) / (1 - 1 / q)


# --- standard test elements --------------------------------------------------

def _nonresidue(p):
    return next(u for u in range(2, p) if pow(u, (p - 1) // 2, p) == p - 1)


def companion(t, n):
    """Companion matrix of x^2 - t x + n."""
    return GL2Rational(0, -n, 1, t)


def sample_element(torus_type, p, v):
    """A regular element of GL2(Q_p) whose centralizer has the given type and v(Delta) = v."""
    if torus_type == "split":
        if v % 2 or (p == 2 and v == 0):
            raise ValueError("no split element with this v(Delta)")
        r = v // 2
        return GL2Rational(1 + p**r if r else 2, 0, 0, 1)
    if torus_type == "unramified":
        if v % 2:
            raise ValueError("unramified elements have even v(Delta)")
        if p == 2:
            return {0: companion(1, 1), 2: companion(0, 3), 4: companion(2, 13)}[v]
        k, u = v // 2, _nonresidue(p)
        return GL2Rational(1, p**k * u, p**k, 1)
    if torus_type == "tamely_ramified":
        if p == 2:
            raise NotImplementedError("p = 2 ramified tori are wild")
        if v == 0:
            return companion(0, p)
        if v % 2 == 0:
            raise ValueError("tamely ramified elements have v(Delta) = 0 or odd")
        return companion(2, 1 - p**v)
    raise ValueError(torus_type)


def check_fixed_geometry(torus_type, p, v, radius=8):
    """Compare a brute-force fixed set with its predicted shape and closed-form counts."""
    g = sample_element(torus_type, p, v)
    vd = vp(g.weyl_discriminant(), p)
    assert vd == v, (torus_type, p, v, vd)
    fs = fixed_set_bruteforce(g, p, radius)
    report = dict(torus_type=torus_type, p=p, v=v, n_vertices=len(fs.vertices), n_edges=len(fs.all_edges))
    r = v // 2
    if torus_type == "split":
        predicted = strip_in_ball(p, radius, r)
        nv, ne = split_transversal_counts(fs)
        shape_ok = set(fs.vertices) == predicted and not fs.flipped
    else:
        if torus_type == "tamely_ramified" and v == 0:
            shape_ok = not fs.vertices and len(fs.flipped) == 1
            nv, ne = 0, len(fs.flipped)
        else:
            core = center_of(fs.vertices, p)
            rad = r if torus_type == "unramified" else (v - 1) // 2
            want_core = 1 if torus_type == "unramified" else 2
            inside = all(distance(x, BASE, p) + rad <= radius for x in core)
            predicted = neighbourhood_in_ball(core, rad, p, radius)
            shape_ok = len(core) == want_core and inside and set(fs.vertices) == predicted
            nv, ne = len(fs.vertices), len(fs.all_edges)
    cv = fixed_count_closed_form(LocalClassData(p, v, torus_type, "vertex"))
    ce = fixed_count_closed_form(LocalClassData(p, v, torus_type, "edge"))
    report.update(
        shape_ok=shape_ok,
        count_vertices=nv,
        count_edges=ne,
        closed_vertices=int(cv),
        closed_edges=int(ce),
        counts_ok=(nv == cv and ne == ce),
        connected=is_connected(fs.vertices, p),
    )
    return report


ACCEPTANCE_GRID = [
    (t, p, v)
    for p in (2, 3, 5)
    for t, vs in (("split", (0, 2, 4)), ("unramified", (0, 2, 4)), ("tamely_ramified", (0, 1, 3)))
    for v in vs
    if not (t == "split" and p == 2 and v == 0) and not (t == "tamely_ramified" and p == 2)
]
