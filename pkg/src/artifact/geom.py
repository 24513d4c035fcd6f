"""Adjoint-Frobenius distance on PGL(2) over R or C, class invariants and archimedean orbital integrals.

Measures.  Haar measure on the identity component G of PGL(2, K) is
hyperbolic volume on G/K times the probability measure on K, where K is
PSO(2) or PSU(2).  In Iwasawa coordinates x = a_s n_u k with
a_s = diag(e^s, 1) this is ds du dk (du Lebesgue on K).  The centralizer of a
regular element carries the measure for which the normalizing function used
in ``orbital_bruteforce`` integrates to one: ds times the probability measure
on the compact part.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .numfield import parse_poly, roots

SQRT2 = math.sqrt(2.0)


# --- elements and the distance -------------------------------------------------

@dataclass(frozen=True)
class MobiusElement:
    """A 2x2 invertible matrix up to scalars; entries (a, b, c, d) row by row."""

    entries: tuple
    field: str = "real"

    def __post_init__(self):
        if self.field not in ("real", "complex"):
            raise ValueError(f"field must be real or complex, got {self.field!r}")
        if len(self.entries) != 4:
            raise ValueError("expected four entries")
        if self.field == "real" and any(isinstance(e, complex) and e.imag != 0 for e in self.entries):
            raise ValueError("complex entry in a real element")
        if self.det == 0:
            raise ValueError("singular matrix")

    @classmethod
    def of(cls, m, field=None):
        m = np.asarray(m) if not isinstance(m, (list, tuple)) else m
        flat = tuple(np.asarray(m, dtype=object).reshape(4).tolist())
        if field is None:
            field = "complex" if any(isinstance(e, complex) and e.imag != 0 for e in flat) else "real"
        return cls(flat, field)

    @classmethod
    def diag(cls, a, b=1, field=None):
        return cls.of([[a, 0], [0, b]], field)

    @classmethod
    def rotation(cls, theta):
        c, s = math.cos(theta), math.sin(theta)
        return cls((c, -s, s, c), "real")

    @property
    def det(self):
        a, b, c, d = self.entries
        return a * d - b * c

    @property
    def trace(self):
        return self.entries[0] + self.entries[3]

    @property
    def is_exact(self):
        return all(isinstance(e, (int, Fraction)) for e in self.entries)

    def array(self):
        dt = complex if self.field == "complex" else float
        return np.array([[complex(e) if dt is complex else float(e) for e in self.entries[:2]],
                         [complex(e) if dt is complex else float(e) for e in self.entries[2:]]])

    @property
    def det_normalized(self):
        """Numeric representative with |det| = 1."""
        m = self.array()
        return m / math.sqrt(abs(complex(np.linalg.det(m))))

    def __matmul__(self, other):
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        field = "complex" if "complex" in (self.field, other.field) else "real"
        return MobiusElement((a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h), field)

    def inverse(self):
        a, b, c, d = self.entries
        return MobiusElement((d, -b, -c, a), self.field)


def adjoint(g):
    """Ad(g) on trace-zero matrices in the orthonormal basis diag(1,-1)/sqrt2, E12, E21.

    Accepts arrays of shape (..., 2, 2); scalars drop out, so no normalization is needed.
    """
    g = np.asarray(g)
    p, q, r, t = g[..., 0, 0], g[..., 0, 1], g[..., 1, 0], g[..., 1, 1]
    det = p * t - q * r
    cols_h = (p * t + q * r, -SQRT2 * p * q, SQRT2 * r * t)
    cols_e = (-SQRT2 * p * r, p * p, -r * r)
    cols_f = (SQRT2 * q * t, -q * q, t * t)
    out = np.stack([np.stack(cols_h, -1), np.stack(cols_e, -1), np.stack(cols_f, -1)], -1)
    return out / det[..., None, None]


def _as_array(x):
    return x.array() if isinstance(x, MobiusElement) else np.asarray(x)


def distance_from_identity(g):
    """||I - Ad(g)||_F, vectorized over leading axes."""
    A = adjoint(g)
    return np.sqrt(np.sum(np.abs(np.eye(3) - A) ** 2, axis=(-2, -1)))


def frobenius_distance(x, y) -> float:
    """d(x, y) = ||I - Ad(y^-1 x)||_F."""
    x, y = _as_array(x), _as_array(y)
    return float(distance_from_identity(np.linalg.solve(y, x)))


# --- conjugacy invariants ------------------------------------------------------

TYPES = ("hyperbolic", "elliptic", "loxodromic", "parabolic", "identity")


@dataclass(frozen=True)
class ConjClassInvariants:
    type: str
    lam: complex | None = None
    weyl_disc: object = None  # exact Fraction for rational real input
    mahler: float | None = None
    mahler_target: str | None = None  # "lambda" or "eigenvalue": which number the polynomial annihilates
    mahler_consistent: bool | None = None

    def as_dict(self):
        lam = None if self.lam is None else [self.lam.real, self.lam.imag]
        wd = self.weyl_disc
        if isinstance(wd, Fraction):
            wd = str(wd)
        elif wd is not None:
            wd = [complex(wd).real, complex(wd).imag]
        return dict(type=self.type, lam=lam, weyl_disc=wd, mahler=self.mahler,
                    mahler_target=self.mahler_target, mahler_consistent=self.mahler_consistent)


def _eigen_ratio(g: MobiusElement):
    tr, det = complex(g.trace), complex(g.det)
    disc = cmath.sqrt(tr * tr - 4 * det)
    mu1, mu2 = (tr + disc) / 2, (tr - disc) / 2
    lam = mu1 / mu2
    # canonical choice among lam, 1/lam: Im >= 0 on the circle, |lam| > 1 off it
    if abs(abs(lam) - 1) < 1e-9:
        return lam if lam.imag >= 0 else 1 / lam
    return lam if abs(lam) > 1 else 1 / lam


def class_invariants(g: MobiusElement, min_poly=None, tol=1e-12) -> ConjClassInvariants:
    tr, det = g.trace, g.det
    if g.is_exact:
        wd = Fraction(4) - Fraction(tr) ** 2 / Fraction(det)
    else:
        wd = 4 - complex(tr) ** 2 / complex(det)
        if g.field == "real":
            wd = wd.real
    a, b, c, d = (complex(e) for e in g.entries)
    scale = max(abs(a), abs(b), abs(c), abs(d))
    if abs(complex(wd)) < tol:
        if max(abs(b), abs(c), abs(a - d)) < tol * scale:
            return ConjClassInvariants("identity", 1 + 0j, wd)
        return ConjClassInvariants("parabolic", None, wd)
    lam = _eigen_ratio(g)
    if abs(abs(lam) - 1) < tol:
        kind = "elliptic"
    elif abs(lam.imag) < tol * abs(lam) and lam.real > 0:
        kind = "hyperbolic"
    elif g.field == "real":
        kind = "hyperbolic"  # negative ratio: det < 0 in PGL(2, R)
    else:
        kind = "loxodromic"
    mahler = target = consistent = None
    if min_poly is not None:
        from .mahler import mahler_measure

        f = parse_poly(min_poly)
        tr_c, det_c = complex(tr), complex(det)
        mu = (tr_c + cmath.sqrt(tr_c * tr_c - 4 * det_c)) / 2 / cmath.sqrt(det_c)
        rts = [complex(r) for r in roots(f)]
        hit = lambda z: min(abs(z - r) for r in rts) < 1e-8 * max(1.0, abs(z))
        if hit(lam) or hit(1 / lam):
            target, z = "lambda", lam
        elif hit(mu) or hit(1 / mu) or hit(-mu) or hit(-1 / mu):
            target, z = "eigenvalue", mu
        else:
            raise ValueError("the polynomial annihilates neither the eigenvalue ratio nor a normalized eigenvalue")
        mahler = mahler_measure(f)
        consistent = max(0.0, math.log(abs(z)), -math.log(abs(z))) <= mahler + 1e-9
    return ConjClassInvariants(kind, lam, wd, mahler, target, consistent)


def normal_form_distance(lam) -> float:
    """Distance from 1 to diag(lam, 1); for rotations this is the same number."""
    lam = complex(lam)
    return math.sqrt(abs(1 - lam) ** 2 + abs(1 - 1 / lam) ** 2)


def meets_ball(g: MobiusElement, R: float) -> bool:
    """Whether the normal form of the class of g lies in the closed ball B(1, R).

    For a normal representative h (diagonal or rotation) ||I - Ad(h)||_F^2 is the sum of
    |1 - eigenvalue|^2; by Schur's inequality no conjugate has smaller norm, so this is
    the class minimum.
    """
    inv = class_invariants(g)
    if inv.type == "parabolic":
        raise ValueError("parabolic element: the class does not attain its infimum")
    if inv.type == "identity":
        return R >= 0
    return normal_form_distance(inv.lam) <= R


# --- test functions ------------------------------------------------------------

def _smooth_step(x):
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


@dataclass(frozen=True)
class RadialBump:
    """f(g) = phi(d(1, g)); phi is 1 on [0, plateau], smooth, and 0 from radius on."""

    radius: float
    plateau: float = 0.0

    def __post_init__(self):
        if not 0 <= self.plateau < self.radius:
            raise ValueError("need 0 <= plateau < radius")

    def profile(self, r):
        return 1.0 - _smooth_step((np.asarray(r, dtype=float) - self.plateau) / (self.radius - self.plateau))

    def __call__(self, g):
        return self.profile(distance_from_identity(g))

    sup = 1.0


def _support_norm2(f: RadialBump):
    # d(1, g) >= ||g||_F^2 / |det g| - 2, so supp f lies in ||g||^2/|det| <= R + 2
    return f.radius + 2.0


# --- orbital integrals ---------------------------------------------------------

def _quad_opts(tol):
    return dict(epsabs=tol * 1e-4, epsrel=tol, limit=200)


def _split_data(g: MobiusElement):
    inv = class_invariants(g)
    if inv.type not in ("hyperbolic", "loxodromic") or g.entries[1] != 0 or g.entries[2] != 0:
        raise ValueError("orbital_split needs a regular diagonal element diag(a, b) with |a| != |b|")
    a, b = complex(g.entries[0]), complex(g.entries[3])
    if abs(abs(a) - abs(b)) < 1e-12 * max(abs(a), abs(b)):
        raise ValueError("|a| = |b|: the element is elliptic, not split")
    if g.field == "real" and (a / b).real < 0:
        raise ValueError("det < 0 lies outside the identity component")
    return a, b


def _unipotent_extent(a, b, f):
    """Radius V with f(diag(a,b) n_v) = 0 for |v| > V."""
    rhs = _support_norm2(f) * abs(a * b) - abs(a) ** 2 - abs(b) ** 2
    return math.sqrt(max(rhs, 0.0)) / abs(a) * 1.001 + 1e-9


def orbital_split(g: MobiusElement, f: RadialBump, tol=1e-8) -> float:
    """|1 - b/a|^-[K:R] times the integral of f(diag(a, b) n_v) over v in K."""
    a, b = _split_data(g)
    V = _unipotent_extent(a, b, f)
    if V <= 1e-9:
        return 0.0
    if g.field == "real":
        ga = np.array([[a.real, 0], [0, b.real]])

        def h(v):
            return float(f(ga @ np.array([[1.0, v], [0.0, 1.0]])))

        val, _ = integrate.quad(h, -V, V, **_quad_opts(tol))
        return val / abs(1 - b / a)

    def h2(v2, v1):
        n = np.array([[1, v1 + 1j * v2], [0, 1]])
        return float(f(np.array([[a, 0], [0, b]]) @ n))

    val, _ = integrate.dblquad(h2, -V, V, -V, V, **{k: v for k, v in _quad_opts(tol).items() if k != "limit"})
    return val / abs(1 - b / a) ** 2


def _rotation_data(g: MobiusElement):
    if g.field != "real":
        raise ValueError("no anisotropic torus over C")
    inv = class_invariants(g)
    if inv.type != "elliptic":
        raise ValueError("orbital_elliptic needs an elliptic element")
    theta = cmath.phase(inv.lam) / 2
    return theta


def _elliptic_extent(theta, f):
    """Hyperbolic radius beyond which f vanishes on conjugates of the rotation by theta."""
    c, s = math.cos(theta), math.sin(theta)
    x = (_support_norm2(f) - 2 * c * c) / (2 * s * s)
    return 0.5 * math.acosh(max(x, 1.0)) * 1.001 + 1e-9


def orbital_elliptic(g: MobiusElement, f: RadialBump, tol=1e-8) -> float:
    """2 pi times the integral over rho > 0 of sinh(rho) f(a g a^-1), a = diag(e^rho, 1).

    This is polar coordinates on G/K around the fixed point of the rotation;
    with t = e^rho the density is (t - 1/t)/2 dt/t.
    """
    theta = _rotation_data(g)
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    rho_max = _elliptic_extent(theta, f)

    def h(rho):
        a = np.diag([math.exp(rho), 1.0])
        ai = np.diag([math.exp(-rho), 1.0])
        return math.sinh(rho) * float(f(a @ rot @ ai))

    val, _ = integrate.quad(h, 0, rho_max, **_quad_opts(tol))
    return 2 * math.pi * val


# nodes for the compact and normalizing directions; the weights sum to one
def _k_nodes_real(m=3):
    phis = np.arange(m) * math.pi / m + 0.1
    c, s = np.cos(phis), np.sin(phis)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2), np.full(m, 1.0 / m)


def _k_nodes_complex():
    quats = np.array([[1, 0, 0, 0], [0.5, 0.5, 0.5, 0.5], [0.6, 0.0, 0.8, 0.0], [0.1, -0.7, 0.1, 0.7]], dtype=float)
    quats /= np.linalg.norm(quats, axis=1, keepdims=True)
    w, x, y, z = quats.T
    ks = np.stack([np.stack([w + 1j * x, y + 1j * z], -1), np.stack([-y + 1j * z, w - 1j * x], -1)], -2)
    return ks, np.full(len(quats), 1.0 / len(quats))


def _alpha_nodes(m=2):
    # alpha = 1/2 on [-1, 1], so that the torus integral of alpha is one
    s, w = np.polynomial.legendre.leggauss(m)
    return s, w * 0.5


def orbital_bruteforce(g: MobiusElement, f: RadialBump, tol=1e-7) -> float:
    """Direct quadrature of the integral over G of alpha(x) f(x^-1 g x) in Iwasawa coordinates.

    Split classes: x = a_s n_u k with alpha depending on s only.  Elliptic
    classes: the centralizer is K itself, alpha = 1, and x^-1 = a_s n_u k runs
    over G with measure ds du dk.
    """
    if tol < 1e-9:
        raise ValueError("tolerance below 1e-9 exceeds the quadrature budget")
    inv = class_invariants(g)
    if inv.type in ("identity", "parabolic"):
        raise ValueError("orbital integrals here are for regular semisimple elements")
    G = g.array()
    if g.field == "real":
        ks, kw = _k_nodes_real()
    else:
        ks, kw = _k_nodes_complex()
    ss, sw = _alpha_nodes()
    kinv = np.linalg.inv(ks)
    weights = (sw[:, None] * kw[None, :]).ravel()

    def integrand(u, elliptic):
        a = np.zeros((len(ss), 2, 2), dtype=G.dtype)
        a[:, 0, 0] = np.exp(ss)
        a[:, 1, 1] = 1
        n = np.array([[1, u], [0, 1]], dtype=complex if isinstance(u, complex) else G.dtype)
        an = a @ n  # (s, 2, 2)
        x = an[:, None] @ ks[None, :]  # x = a n k, shape (s, k, 2, 2)
        xi = np.linalg.inv(x)
        conj = (x @ G @ xi) if elliptic else (xi @ G @ x)
        return float(np.dot(weights, f(conj).ravel()))

    opts = _quad_opts(tol)
    if inv.type == "elliptic":
        if g.field != "real":
            raise ValueError("no anisotropic torus over C")
        theta = cmath.phase(inv.lam) / 2
        rho_max = _elliptic_extent(theta, f)
        ch = math.cosh(rho_max)
        # the point a_s n_u . i = e^s (u + i) at hyperbolic distance <= rho_max from i
        def u_half(s):
            Y = math.exp(s)
            X2 = 2 * Y * (ch - 1) - (Y - 1) ** 2
            return math.sqrt(max(X2, 0.0)) / Y

        def h(u, s):
            a = np.diag([math.exp(s), 1.0])
            n = np.array([[1.0, u], [0.0, 1.0]])
            x = (a @ n)[None] @ ks
            conj = x @ G @ np.linalg.inv(x)
            return float(np.dot(kw, f(conj)))

        val, _ = integrate.dblquad(h, -rho_max, rho_max, lambda s: -u_half(s), u_half, epsabs=opts["epsabs"], epsrel=tol)
        return val

    a, b = complex(G[0, 0]), complex(G[1, 1])
    if G[0, 1] != 0 or G[1, 0] != 0:
        raise ValueError("pass split elements in diagonal form")
    rhs = _support_norm2(f) * abs(a * b) - abs(a) ** 2 - abs(b) ** 2
    U = math.sqrt(max(rhs, 0.0)) / abs(a - b) * 1.001 + 1e-9
    if g.field == "real":
        val, _ = integrate.quad(lambda u: integrand(u, False), -U, U, **opts)
        return val
    val, _ = integrate.dblquad(lambda u2, u1: integrand(complex(u1, u2), False), -U, U, -U, U,
                               epsabs=opts["epsabs"], epsrel=tol)
    return val


# --- presets and reports -------------------------------------------------------

@dataclass(frozen=True)
class OrbitalPreset:
    name: str
    element: MobiusElement
    bump: RadialBump
    kind: str  # split or elliptic


def preset_grid():
    out = []
    for r in (2.0, 4.0, math.e):
        out.append(OrbitalPreset(f"split_real_{r:.4g}", MobiusElement.diag(r, 1.0, "real"), RadialBump(5.0 if r > 3 else 3.0, 0.5), "split"))
    for name, th in (("pi/6", math.pi / 6), ("pi/4", math.pi / 4), ("pi/2", math.pi / 2)):
        out.append(OrbitalPreset(f"elliptic_{name}", MobiusElement.rotation(th), RadialBump(4.0, 0.5), "elliptic"))
    for lam in (2.0 + 0j, 2j, cmath.exp(1 + 1j), 3 * cmath.exp(1j * math.pi / 3)):
        out.append(OrbitalPreset(f"split_complex_{lam.real:.3g}{lam.imag:+.3g}i", MobiusElement((lam, 0, 0, 1 + 0j), "complex"), RadialBump(4.0, 1.0), "split"))
    return out


def compare_preset(p: OrbitalPreset, tol=1e-7):
    """Closed reduction against brute force plus the measured bound constant."""
    closed = orbital_split(p.element, p.bump, tol) if p.kind == "split" else orbital_elliptic(p.element, p.bump, tol)
    brute = orbital_bruteforce(p.element, p.bump, max(tol, 1e-6))
    inv = class_invariants(p.element)
    delta = abs(complex(inv.weyl_disc))
    rel = abs(closed - brute) / max(abs(brute), 1e-300)
    if p.kind == "split":
        shape = delta ** -0.5 if p.element.field == "real" else delta ** -1.0
    else:
        shape = 4.0 / delta  # |sin theta|^-2 in terms of Delta = 4 sin^2 theta
    return dict(name=p.name, closed=closed, brute=brute, rel_diff=rel, weyl_disc=delta,
                measured_constant=abs(closed) / (shape * p.bump.sup))
