"""Local measure ratios, covolumes of congruence lattices and volumes of norm tori."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
import sympy
from scipy import integrate

from . import numfield as nf
from .numfield import NumberField, dirichlet_L_quadratic


class InadmissibleSpecError(ValueError):
    pass


# --- local ratios --------------------------------------------------------------

def _gauss_legendre_tan(fn, dims, n):
    """Tensor Gauss-Legendre rule after x = tan(u), for integrals over R or R+ per axis.

    dims is a sequence of 'full' (whole line) or 'half' (positive half line).
    """
    u, w = np.polynomial.legendre.leggauss(n)
    axes = []
    for kind in dims:
        lo, hi = (-math.pi / 2, math.pi / 2) if kind == "full" else (0.0, math.pi / 2)
        t = 0.5 * (hi - lo) * u + 0.5 * (hi + lo)
        axes.append((np.tan(t), 0.5 * (hi - lo) * w / np.cos(t) ** 2))
    grids = np.meshgrid(*[a[0] for a in axes], indexing="ij")
    weights = np.ones_like(grids[0])
    for i, (_, wt) in enumerate(axes):
        shape = [1] * len(axes)
        shape[i] = -1
        weights = weights * wt.reshape(shape)
    return float(np.sum(fn(*grids) * weights))


def _tan_mapped(f, k):
    """f composed with tan in each of its k arguments, times the Jacobian; compactifies the domain."""

    def g(*u):
        x = [math.tan(t) for t in u]
        jac = 1.0
        for t in u:
            jac /= math.cos(t) ** 2
        return f(*x) * jac

    return g


def local_ratio_real_oracle(resolution=None, tol=1e-12):
    """Integral of (1 + x^2 + y^2)^-2 over the upper half plane, equal to pi/2.

    With ``resolution`` a tensor Gauss-Legendre rule with that many nodes per axis
    is used, otherwise adaptive quadrature at tolerance ``tol``.
    Returns ``(value, ratio)`` with ratio = pi^2 / value.
    """
    f = lambda y, x: (1 + y * y + x * x) ** -2.0
    if resolution is not None:
        if resolution < 1000:
            raise ValueError("resolution below 1000 nodes per axis")
        value = _gauss_legendre_tan(lambda x, y: f(y, x), ("full", "half"), resolution)
    else:
        if tol > 1e-7:
            raise ValueError("tolerance above 1e-7")
        value, err = integrate.dblquad(_tan_mapped(f, 2), -math.pi / 2, math.pi / 2, 0, math.pi / 2, epsabs=tol, epsrel=tol)
        if not np.isfinite(value) or err > 1e3 * tol:
            raise ArithmeticError(f"quadrature did not converge (error estimate {err})")
    return value, math.pi**2 / value


def local_ratio_complex_oracle(resolution=None, tol=1e-12):
    """Integral of y (1 + y^2 + x1^2 + x2^2)^-4 over upper half space (hyperbolic volume form times the test function).

    The y-integral is (1/6)(1 + r^2)^-3, and the total is pi/12.  Returns
    ``(value, ratio)`` with ratio = (4 pi^3 / 3) / value.
    """
    f = lambda y, x2, x1: y * (1 + y * y + x1 * x1 + x2 * x2) ** -4.0
    if resolution is not None:
        if resolution < 100:
            raise ValueError("resolution below 100 nodes per axis")
        value = _gauss_legendre_tan(lambda x1, x2, y: f(y, x2, x1), ("full", "full", "half"), resolution)
    else:
        if tol > 1e-7:
            raise ValueError("tolerance above 1e-7")
        # the integrand is rotation invariant in (x1, x2), so integrate over |x| = r
        polar = lambda y, r: 2 * math.pi * r * f(y, r, 0.0)
        value, err = integrate.dblquad(polar, 0, np.inf, 0, np.inf, epsabs=tol, epsrel=tol)
        if not np.isfinite(value) or err > 1e3 * tol:
            raise ArithmeticError(f"quadrature did not converge (error estimate {err})")
    return value, 4 * math.pi**3 / 3 / value


def complex_inner_reduction(tol=1e-12):
    """Check of the y-integral: (1/6) * integral over R^2 of (1 + |x|^2)^-3 = pi/12."""
    value, _ = integrate.dblquad(lambda x2, x1: (1 + x1 * x1 + x2 * x2) ** -3.0 / 6, -np.inf, np.inf, -np.inf, np.inf, epsabs=tol, epsrel=tol)
    return value


HAMILTON_RATIO = 4 * math.pi**2


def local_ratio_padic(q, kind="vertex"):
    """Tamagawa-to-standard ratio at an unramified split place: (1 - q^-2), times 2/(q + 1) for edges."""
    from fractions import Fraction

    base = 1 - Fraction(1, q * q)
    if kind == "vertex":
        return base
    if kind == "edge":
        return base * Fraction(2, q + 1)
    raise ValueError(f"unknown kind {kind!r}")


def local_ratio_ramified(q):
    """Tamagawa volume of the projective unit group of the local division algebra: 2 (1 - q^-2)/(q - 1)."""
    from fractions import Fraction

    return 2 * (1 - Fraction(1, q * q)) / (q - 1)


def padic_ratio_from_tree(q, n):
    """The vertex ratio recovered from partial tree sums: (1 - q^-4)/(1 - q^-1) / tree_sum."""
    from .btree import tree_weight_partial_sum
    from fractions import Fraction

    q_ = Fraction(q)
    tam = (1 - q_**-4) / (1 - 1 / q_)
    return tam / tree_weight_partial_sum(q, n)


@dataclass
class MeasureRatioReport:
    place_type: str
    ratio: float
    oracle_value: float
    discrepancy: float

    def as_dict(self):
        return dict(place_type=self.place_type, ratio=self.ratio, oracle_value=self.oracle_value, discrepancy=self.discrepancy)


def ratio_reports(q=3, tree_depth=40):
    """One row per place type; each ratio is compared with an independently computed value."""
    rows = []
    v, r = local_ratio_real_oracle()
    rows.append(MeasureRatioReport("real_split", r, 2 * math.pi, abs(r - 2 * math.pi)))
    v, r = local_ratio_complex_oracle()
    rows.append(MeasureRatioReport("complex_split", r, 16 * math.pi**2, abs(r - 16 * math.pi**2)))
    rows.append(MeasureRatioReport("hamilton", HAMILTON_RATIO, 4 * math.pi**2, 0.0))
    tree = float(padic_ratio_from_tree(q, tree_depth))
    vert = float(local_ratio_padic(q, "vertex"))
    rows.append(MeasureRatioReport("padic_vertex", vert, tree, abs(vert - tree)))
    edge = float(local_ratio_padic(q, "edge"))
    # an edge stabilizer has index (q + 1)/2 in a vertex stabilizer
    rows.append(MeasureRatioReport("padic_edge", edge, tree * 2 / (q + 1), abs(edge - tree * 2 / (q + 1))))
    ram = float(local_ratio_ramified(q))
    rows.append(MeasureRatioReport("padic_ramified", ram, 2 * (1 - q**-2) / (q - 1), abs(ram - 2 * (1 - q**-2) / (q - 1))))
    return rows


# --- lattices and covolumes ----------------------------------------------------

@dataclass
class LatticeSpec:
    """Data of a congruence lattice; finite places are given by their norms."""

    field: NumberField
    archimedean_type: str
    ram_f: list = field(default_factory=list)
    S: list = field(default_factory=list)
    index_UV: int = 1
    cl_V: int = 1

    @classmethod
    def from_dict(cls, d):
        allowed = {"field", "archimedean_type", "ram_f", "S", "index_UV", "cl_V"}
        extra = set(d) - allowed
        if extra:
            raise ValueError(f"unknown keys {sorted(extra)}")
        K = d["field"]
        if isinstance(K, str):
            K = nf.preset(K)
        elif isinstance(K, dict):
            K = NumberField(nf.parse_poly(K["poly"]), K.get("name", ""), frozenset(K.get("maximal_at", ())))
        return cls(K, d["archimedean_type"], list(d.get("ram_f", [])), list(d.get("S", [])), int(d.get("index_UV", 1)), int(d.get("cl_V", 1)))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def ram_inf(self):
        r1, r2 = self.field.signature
        return r1 - 1 if self.archimedean_type == "real" else r1

    def validate(self):
        r1, r2 = self.field.signature
        if self.archimedean_type == "real" and r2 != 0:
            raise InadmissibleSpecError("real type needs a totally real field (r2 = 0)")
        if self.archimedean_type == "complex" and r2 != 1:
            raise InadmissibleSpecError("complex type needs exactly one complex place (r2 = 1)")
        if self.archimedean_type not in ("real", "complex"):
            raise InadmissibleSpecError(f"unknown archimedean type {self.archimedean_type!r}")
        if (len(self.ram_f) + self.ram_inf()) % 2:
            raise InadmissibleSpecError(
                f"ramification set has odd size {len(self.ram_f)} + {self.ram_inf()}; it must be even"
            )
        if self.index_UV < 1 or self.cl_V < 1:
            raise InadmissibleSpecError("index and class number must be positive")
        self._check_places(self.ram_f, "ram_f")
        self._check_places(self.S, "S")
        return self

    def _check_places(self, norms, label):
        wanted = {}
        for N in norms:
            wanted[N] = wanted.get(N, 0) + 1
        for N, count in wanted.items():
            fac = sympy.factorint(N)
            if len(fac) != 1:
                raise InadmissibleSpecError(f"{label}: {N} is not a prime power")
            (p, f), = fac.items()
            have = sum(1 for g, _ in nf.prime_splitting(self.field, p).factors if g == f)
            if count > have:
                raise InadmissibleSpecError(f"{label}: {self.field} has only {have} places of norm {N}")


@dataclass
class Covolume:
    value: float
    error: float
    exact: object = None  # sympy expression when the field is Q

    def as_dict(self):
        return dict(value=self.value, error=self.error, exact=None if self.exact is None else str(self.exact))


def _euler_factors(spec):
    ram = list(spec.ram_f)
    s_only = [N for N in spec.S if N not in ram]
    num = 1
    for N in ram:
        num *= N - 1
    for N in s_only:
        num *= N + 1
    return num


def covolume(spec: LatticeSpec, X=20000) -> Covolume:
    """Hyperbolic covolume of the congruence lattice.

    real:    [U:V]/|cl| |Delta|^(3/2) zeta_k(2) prod(N-1) prod(N+1) / (pi (4 pi^2)^(n-1) 2^|S|)
    complex: the same numerator over 8 pi^2 (4 pi^2)^(n-2) 2^|S|.
    """
    spec.validate()
    K = spec.field
    n = K.degree
    disc = abs(K.poly_discriminant)
    num = _euler_factors(spec)
    pi = sympy.pi
    if spec.archimedean_type == "real":
        den = pi * (4 * pi**2) ** (n - 1) * 2 ** len(spec.S)
    else:
        den = 8 * pi**2 * (4 * pi**2) ** (n - 2) * 2 ** len(spec.S)
    coeff = sympy.Rational(spec.index_UV, spec.cl_V) * sympy.sqrt(disc) ** 3 * num / den
    if n == 1:
        exact = sympy.nsimplify(coeff * pi**2 / 6)
        return Covolume(float(exact), 0.0, exact)
    z, tail = nf.dedekind_zeta(K, 2, X)
    c = float(coeff)
    return Covolume(c * float(z + tail / 2), c * float(tail / 2) + 1e-15, None)


def covolume_with_place(spec, N):
    return covolume(LatticeSpec(spec.field, spec.archimedean_type, spec.ram_f + [N], spec.S, spec.index_UV, spec.cl_V))


# --- norm tori -------------------------------------------------------------------

# class number, number of roots of unity and regulator of Q(sqrt d)
CLASS_DATA = {
    -3: (1, 6, None),
    -4: (1, 4, None),
    -7: (1, 2, None),
    -8: (1, 2, None),
    5: (1, 2, lambda: math.log((1 + math.sqrt(5)) / 2)),
    8: (1, 2, lambda: math.log(1 + math.sqrt(2))),
    12: (1, 2, lambda: math.log(2 + math.sqrt(3))),
    13: (1, 2, lambda: math.log((3 + math.sqrt(13)) / 2)),
}


def _torus_invariants(d):
    l = nf.quadratic_field(d)
    r1l, r2l = l.signature
    a = r1l - 1 + r2l - 0
    e = 1
    for p in sympy.primefactors(abs(d)):
        for _, ram in nf.prime_splitting(l, p).factors:
            e *= ram
    return l, r1l, r2l, a, e


def torus_volume_quadratic(d: int, N: int = 10**5):
    """Standard volume of the norm-one torus of Q(sqrt d)/Q, by two routes.

    lambda route: 2 Lambda(1, chi)/(2^a e), with the completed L-value built from
    Gamma factors and the partial sum of L(1, chi_d).
    rho route: 2 sqrt|d| rho / (2^a (2 pi)^r2 e), with the residue rho of the
    Dedekind zeta function taken from the class number formula.
    """
    if not nf.is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant")
    l, r1l, r2l, a, e = _torus_invariants(d)
    L, L_err = dirichlet_L_quadratic(d, N)
    # Lambda(1, chi) = completed zeta of l over completed zeta of Q, as residues at s = 1
    gam = (abs(d) / (4**r2l * math.pi**2)) ** 0.5 * math.gamma(0.5) ** r1l * math.gamma(1.0) ** r2l / (math.pi**-0.5 * math.gamma(0.5))
    lam = gam * L
    vol_lambda = 2 * lam / (2**a * e)
    err_lambda = 2 * gam * L_err / (2**a * e)
    out = dict(d=d, a=a, e=e, L=L, L_error=L_err, vol_lambda=vol_lambda, err_lambda=err_lambda)
    if d in CLASS_DATA:
        h, w, reg = CLASS_DATA[d]
        R = reg() if reg else 1.0
        rho = 2**r1l * (2 * math.pi) ** r2l * h * R / (w * math.sqrt(abs(d)))
        vol_rho = 2 * math.sqrt(abs(d)) * rho / (2**a * (2 * math.pi) ** r2l * e)
        out.update(rho=rho, vol_rho=vol_rho, agree=abs(vol_rho - vol_lambda) <= err_lambda + 1e-12)
    return out


# --- lower-bound certificate -------------------------------------------------------

def volume_lower_bound_certificate(spec: LatticeSpec, regulator_floor=None):
    """Evaluate the covolume next to the shape |Delta|^0.044 prod(N-1)/2 prod(N+1)/2 and a regulator floor.

    Implicit constants are unknown, so nothing is asserted; small ratios are flagged.
    """
    vol = covolume(spec)
    K = spec.field
    disc = abs(K.poly_discriminant)
    rhs = disc**0.044
    for N in spec.ram_f:
        rhs *= (N - 1) / 2
    for N in spec.S:
        if N not in spec.ram_f:
            rhs *= (N + 1) / 2
    r1, r2 = K.signature
    zimmert = math.exp(0.46 * r1 + 0.1 * r2)
    ratio = vol.value / rhs
    return dict(
        covolume=vol.value,
        covolume_error=vol.error,
        bound_rhs=rhs,
        ratio=ratio,
        zimmert_floor=zimmert,
        regulator_floor=regulator_floor,
        regulator_ratio=None if regulator_floor is None else regulator_floor / zimmert,
        suspicious=ratio < 1e-3,
    )


# --- hyperbolic balls --------------------------------------------------------------

def hyperbolic_ball_volume(R):
    """Volume of a ball of radius R in hyperbolic 3-space."""
    if R <= 0:
        raise ValueError("radius must be positive")
    return math.pi * (math.sinh(2 * R) - 2 * R)


def hyperbolic_disc_area(R):
    if R <= 0:
        raise ValueError("radius must be positive")
    return 2 * math.pi * (math.cosh(R) - 1)


def nerve_degree_constant():
    return hyperbolic_ball_volume(4 / 5) / hyperbolic_ball_volume(2 / 15)
