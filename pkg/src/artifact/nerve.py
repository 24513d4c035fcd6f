"""Greedy ball packings, cover checks and nerves of ball covers on sampled metric spaces."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import volume

PACK = 1 / 16  # packing balls B(x, i(x)/16)
COVER = 1 / 5  # cover balls B(x, i(x)/5)


@dataclass
class MetricSampleSpace:
    """Finite sample of a metric space.

    ``dist_to(i, idx)`` returns distances from sample i to the samples idx.
    ``inj`` holds i(x) = min(injectivity radius, 1) per sample.
    """

    points: np.ndarray
    dist_to: object
    inj: np.ndarray
    geometry: str  # euclidean, hyperbolic2, hyperbolic3
    volume_dim: int
    name: str = ""

    def __post_init__(self):
        self.inj = np.minimum(np.asarray(self.inj, dtype=float), 1.0)
        if len(self.inj) != len(self.points):
            raise ValueError("one injectivity value per point")

    def __len__(self):
        return len(self.points)

    def dist(self, i, j):
        return float(self.dist_to(i, np.array([j]))[0])

    def spot_check(self, n=200, seed=0, tol=1e-9):
        """Symmetry, zero diagonal, triangle inequality and 1-Lipschitz i(x) on random samples."""
        rng = np.random.default_rng(seed)
        N = len(self)
        bad = dict(symmetry=0, diagonal=0, triangle=0, lipschitz=0)
        for _ in range(n):
            a, b, c = (int(v) for v in rng.integers(0, N, 3))
            dab, dba, dbc, dac = self.dist(a, b), self.dist(b, a), self.dist(b, c), self.dist(a, c)
            bad["symmetry"] += int(abs(dab - dba) > tol)
            bad["diagonal"] += int(abs(self.dist(a, a)) > tol)
            bad["triangle"] += int(dac > dab + dbc + tol)
            bad["lipschitz"] += int(abs(self.inj[a] - self.inj[b]) > dab + tol)
        return bad


def flat_torus(dim=2, samples=10_000, seed=7, layout="random", inj=0.5):
    """R^dim / Z^dim sampled uniformly (or on a grid); the injectivity radius is 1/2."""
    if layout == "grid":
        side = round(samples ** (1 / dim))
        if side**dim != samples:
            raise ValueError("grid layout needs a perfect power sample count")
        axes = [np.arange(side) / side] * dim
        pts = np.stack(np.meshgrid(*axes, indexing="ij"), -1).reshape(-1, dim)
    else:
        pts = np.random.default_rng(seed).random((samples, dim))

    def dist_to(i, idx):
        d = np.abs(pts[idx] - pts[i])
        d = np.minimum(d, 1 - d)
        return np.sqrt(np.sum(d * d, axis=-1))

    return MetricSampleSpace(pts, dist_to, np.full(samples, inj), "euclidean", dim, f"torus{dim}")


def poincare_patch(samples=3000, seed=7, radius=2.0, base_inj=0.4, slope=0.3):
    """Hyperbolic disc of the given radius, uniformly sampled by area; i(x) = min(base + slope rho(x), 1)."""
    rng = np.random.default_rng(seed)
    u = rng.random(samples)
    rho = np.arccosh(1 + u * (math.cosh(radius) - 1))
    phi = rng.random(samples) * 2 * math.pi
    r = np.tanh(rho / 2)
    pts = np.stack([r * np.cos(phi), r * np.sin(phi)], -1)
    sq = 1 - np.sum(pts * pts, axis=-1)

    def dist_to(i, idx):
        num = np.sum((pts[idx] - pts[i]) ** 2, axis=-1)
        return np.arccosh(np.maximum(1 + 2 * num / (sq[idx] * sq[i]), 1.0))

    return MetricSampleSpace(pts, dist_to, base_inj + slope * rho, "hyperbolic2", 2, "poincare")


SPACES = {"torus2": flat_torus, "torus3": lambda samples=8000, seed=7: flat_torus(3, samples, seed), "poincare": poincare_patch}


def space_preset(name, **kw):
    try:
        return SPACES[name](**kw)
    except KeyError:
        raise ValueError(f"unknown space {name!r}; choose from {sorted(SPACES)}") from None


# --- packing and cover ---------------------------------------------------------

def greedy_packing(space: MetricSampleSpace):
    """Scan samples in index order and keep each one whose packing ball misses all kept ones."""
    N = len(space)
    blocked = np.zeros(N, dtype=bool)
    centers = []
    everything = np.arange(N)
    for i in range(N):
        if blocked[i]:
            continue
        centers.append(i)
        d = space.dist_to(i, everything)
        blocked |= d < PACK * (space.inj[i] + space.inj)
    return centers


def packing_violations(space, centers):
    c = np.asarray(centers)
    bad = 0
    for k, i in enumerate(c[:-1]):
        rest = c[k + 1:]
        bad += int(np.sum(space.dist_to(i, rest) < PACK * (space.inj[i] + space.inj[rest])))
    return bad


@dataclass
class CoverReport:
    coverage: float
    uncovered: list = field(default_factory=list)  # diagnostics per uncovered sample

    def as_dict(self):
        return dict(coverage=self.coverage, uncovered=self.uncovered)


def _membership(space, centers, scale):
    """Boolean matrix: sample j lies in B(c, scale * i(c))."""
    everything = np.arange(len(space))
    return np.stack([space.dist_to(c, everything) < scale * space.inj[c] for c in centers])


def cover_check(space: MetricSampleSpace, centers) -> CoverReport:
    if not centers:
        return CoverReport(0.0 if len(space) else 1.0)
    inside = _membership(space, centers, COVER).any(axis=0)
    report = CoverReport(float(inside.mean()))
    for j in np.flatnonzero(~inside)[:50]:
        # the packing ball of j must meet some center's; re-check the chain for that center
        c = np.asarray(centers)
        dc = np.array([space.dist(int(x), int(j)) for x in c])
        k = int(np.argmin(dc - PACK * (space.inj[c] + space.inj[j])))
        x = int(c[k])
        report.uncovered.append(dict(sample=int(j), nearest_center=x, dist=float(dc[k]),
                                     inj_ratio=float(space.inj[j] / space.inj[x]),
                                     chain_inj=bool(space.inj[j] < 17 / 15 * space.inj[x]),
                                     chain_dist=bool(dc[k] < 2 / 15 * space.inj[x])))
    return report


# --- nerve ---------------------------------------------------------------------

@dataclass
class NerveComplex:
    vertices: list
    simplices: dict  # dimension -> set of sorted tuples of vertex positions
    witnesses: dict = field(default_factory=dict)

    @property
    def edges(self):
        return self.simplices.get(1, set())

    def degrees(self):
        deg = [0] * len(self.vertices)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def euler_characteristic(self):
        return sum((-1) ** k * len(s) for k, s in self.simplices.items())

    def is_downward_closed(self):
        for k, simp in self.simplices.items():
            if k == 0:
                continue
            for s in simp:
                for face in combinations(s, k):
                    if face not in self.simplices.get(k - 1, set()):
                        return False
        return True

    def is_connected(self):
        n = len(self.vertices)
        if n == 0:
            return True
        adj = [[] for _ in range(n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == n

    def summary(self):
        deg = self.degrees()
        return dict(vertices=len(self.vertices), counts={k: len(v) for k, v in sorted(self.simplices.items())},
                    euler_characteristic=self.euler_characteristic(), max_degree=max(deg, default=0),
                    connected=self.is_connected())


def build_nerve(space: MetricSampleSpace, centers, dim_cap=2) -> NerveComplex:
    """Edges from the exact pairwise test; triangles and tetrahedra from sample witnesses."""
    if not 0 <= dim_cap <= 3:
        raise ValueError("dim_cap must be between 0 and 3")
    c = np.asarray(centers, dtype=int)
    simplices = {0: {(k,) for k in range(len(c))}}
    if dim_cap >= 1:
        edges = set()
        for k, x in enumerate(c):
            d = space.dist_to(x, c)
            hits = np.flatnonzero(d < COVER * (space.inj[x] + space.inj[c]))
            edges.update((k, int(m)) for m in hits if m > k)
        simplices[1] = edges
    witnesses = {}
    if dim_cap >= 2 and len(c):
        member = _membership(space, c, COVER)
        for j in range(len(space)):
            ball_ids = tuple(np.flatnonzero(member[:, j]).tolist())
            for k in range(2, dim_cap + 1):
                for s in combinations(ball_ids, k + 1):
                    if s not in simplices.setdefault(k, set()):
                        simplices[k].add(s)
                        witnesses[s] = j
    # downward closure; witnessed faces are already present but the closure keeps the invariant explicit
    for k in range(max(simplices), 1, -1):
        for s in list(simplices.get(k, ())):
            for face in combinations(s, k):
                simplices.setdefault(k - 1, set()).add(face)
    return NerveComplex([int(x) for x in c], simplices, witnesses)


def theoretical_degree_bound(space: MetricSampleSpace):
    """Volume ratio V(4/5)/V(2/15) for the geometry of the space, and its ceiling."""
    if space.geometry == "euclidean":
        # (4/5) / (2/15) = 6 exactly
        return 6**space.volume_dim, float(6**space.volume_dim)
    if space.geometry == "hyperbolic3":
        ratio = volume.nerve_degree_constant()
    elif space.geometry == "hyperbolic2":
        ratio = volume.hyperbolic_disc_area(4 / 5) / volume.hyperbolic_disc_area(2 / 15)
    else:
        raise ValueError(f"no volume ratio for geometry {space.geometry!r}")
    return math.ceil(ratio), ratio


def degree_bound(space: MetricSampleSpace, nerve: NerveComplex):
    bound, _ = theoretical_degree_bound(space)
    return max(nerve.degrees(), default=0), bound


def run(space: MetricSampleSpace, dim_cap=2):
    centers = greedy_packing(space)
    cover = cover_check(space, centers)
    nerve = build_nerve(space, centers, dim_cap)
    max_deg, bound = degree_bound(space, nerve)
    hist = np.bincount(nerve.degrees()) if centers else np.array([], dtype=int)
    return dict(space=space.name, samples=len(space), centers=len(centers),
                packing_violations=packing_violations(space, centers), coverage=cover.coverage,
                uncovered=cover.uncovered, max_degree=max_deg, degree_bound=bound,
                nerve=nerve.summary(), degree_histogram=hist.tolist())
