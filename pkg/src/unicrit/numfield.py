"""Exact arithmetic in Q[x]/(m(x)) and integrality certificates.

A NumberField is Q[x] modulo a monic irreducible rational polynomial;
elements are rational coordinate vectors in the power basis.  On top of
that sit the certificates this package actually cares about: minimal
polynomials, norms and traces, algebraic-integer and unit verdicts, and
the orbit-level congruences satisfied by multipliers of periodic cycles
of z^n + c at rational parameters.

No integral bases, no ideal arithmetic: integrality is always certified
through the minimal polynomial, which keeps everything elementary and
exact.  All values are immutable and all functions pure.
"""

from __future__ import annotations

import math
from dataclasses import InitVar, dataclass
from fractions import Fraction
from typing import Sequence

from .dynmaps import dynatomic
from .factorz import factor
from .polycore import IntPoly, squarefree_part

__all__ = [
    "FieldElement",
    "IntegralityCertificate",
    "NumberField",
    "OrbitCongruences",
    "OrbitInField",
    "OrbitUnitReport",
    "ParabolicCollisionError",
    "RatPoly",
    "congruence_certificates",
    "dynamical_unit_check",
    "is_algebraic_integer",
    "is_unit",
    "minimal_polynomial",
    "norm_and_trace",
    "periodic_orbit_in_field",
    "prime_to_n_test",
]


class ParabolicCollisionError(ValueError):
    """The dynatomic specialization has a repeated or premature root.

    Raised when a requested orbit computation lands exactly on a
    parabolic parameter.  Callers treat this as a routing signal (the
    parameter belongs to the parabolic pipeline), not as a failure.
    """


def _frac(x) -> Fraction:
    if isinstance(x, float):
        raise TypeError("rational input required, not float")
    return Fraction(x)


@dataclass(frozen=True)
class RatPoly:
    """Dense univariate polynomial over Q, coefficients ascending."""

    coeffs: tuple[Fraction, ...]
    var: str = "y"

    def __post_init__(self) -> None:
        cs = [_frac(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __call__(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def cleared(self) -> IntPoly:
        """Smallest positive integer multiple with integer coefficients."""
        if self.is_zero:
            return IntPoly.zero(self.var)
        scale = math.lcm(*(c.denominator for c in self.coeffs))
        return IntPoly(tuple(int(c * scale) for c in self.coeffs), self.var)

    def to_intpoly(self) -> IntPoly:
        if not self.is_integral:
            raise ValueError("polynomial has non-integer coefficients")
        return IntPoly(tuple(int(c) for c in self.coeffs), self.var)

    @classmethod
    def from_intpoly(cls, p: IntPoly) -> "RatPoly":
        return cls(tuple(Fraction(c) for c in p.coeffs), p.var)

    def to_json(self) -> dict:
        return {"var": self.var, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "RatPoly":
        return cls(tuple(Fraction(c) for c in obj["coeffs"]), obj["var"])


@dataclass(frozen=True)
class NumberField:
    """Q[x]/(modulus) for a monic irreducible rational modulus.

    >>> K = NumberField(RatPoly((Fraction(1), Fraction(0), Fraction(1)), "x"))
    >>> K.degree
    2
    >>> (K.generator() ** 2).coords
    (Fraction(-1, 1), Fraction(0, 1))
    """

    modulus: RatPoly
    check: InitVar[bool] = True

    def __post_init__(self, check: bool) -> None:
        if self.modulus.degree < 1:
            raise ValueError("modulus must have degree >= 1")
        if not self.modulus.is_monic:
            raise ValueError("modulus must be monic")
        if check and self.modulus.degree > 1:
            from .factorz import is_irreducible

            if not is_irreducible(self.modulus.cleared()):
                raise ValueError("modulus must be irreducible over Q")

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def var(self) -> str:
        return self.modulus.var

    def element(self, coords: Sequence) -> "FieldElement":
        cs = [_frac(c) for c in coords]
        if len(cs) > self.degree:
            raise ValueError("coordinate vector longer than field degree")
        cs += [Fraction(0)] * (self.degree - len(cs))
        return FieldElement(self, tuple(cs))

    def zero(self) -> "FieldElement":
        return self.element(())

    def one(self) -> "FieldElement":
        return self.element((1,))

    def generator(self) -> "FieldElement":
        if self.degree == 1:
            # x = r in Q[x]/(x - r)
            return self.element((-self.modulus.coeffs[0],))
        return self.element((0, 1))

    def from_rational(self, r) -> "FieldElement":
        return self.element((_frac(r),))


@dataclass(frozen=True)
class FieldElement:
    """Element of a NumberField in power-basis coordinates, length d."""

    field: NumberField
    coords: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != self.field.degree:
            raise ValueError("coordinate vector must have length exactly d")
        object.__setattr__(self, "coords", tuple(_frac(c) for c in self.coords))

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("element is not rational")
        return self.coords[0]

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements live in different fields")
            return other
        return self.field.from_rational(other)

    def __add__(self, other) -> "FieldElement":
        o = self._coerce(other)
        return FieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, o.coords))
        )

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other) -> "FieldElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other) -> "FieldElement":
        o = self._coerce(other)
        d = self.field.degree
        conv = [Fraction(0)] * (2 * d - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(o.coords):
                    if b:
                        conv[i + j] += a * b
        return FieldElement(self.field, _reduce_coords(conv, self.field.modulus))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "FieldElement":
        # scalar division only; field inversion is out of scope
        if isinstance(other, FieldElement):
            if not other.is_rational:
                raise TypeError("division by a non-rational element")
            other = other.as_fraction()
        s = _frac(other)
        if s == 0:
            raise ZeroDivisionError("division by zero")
        return FieldElement(self.field, tuple(a / s for a in self.coords))

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            raise ValueError("negative exponents are not supported")
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def _reduce_coords(conv: list[Fraction], modulus: RatPoly) -> tuple[Fraction, ...]:
    """Reduce a raw convolution modulo the monic modulus."""
    d = modulus.degree
    rem = list(conv)
    for i in range(len(rem) - 1, d - 1, -1):
        q = rem[i]
        if q:
            for j in range(d):
                rem[i - d + j] -= q * modulus.coeffs[j]
        rem[i] = Fraction(0)
    rem = rem[:d]
    rem += [Fraction(0)] * (d - len(rem))
    return tuple(rem)


# ---------------------------------------------------------------------------
# minimal polynomials, norms, traces


def _mult_matrix(e: FieldElement) -> list[list[Fraction]]:
    """Matrix of multiplication by e in the power basis (rows[i][j])."""
    d = e.field.degree
    mod = e.field.modulus
    cols = []
    v = list(e.coords)
    for _ in range(d):
        cols.append(tuple(v))
        # multiply by x and reduce
        v = [Fraction(0)] + v
        v = list(_reduce_coords(v, mod))
    return [[cols[j][i] for j in range(d)] for i in range(d)]


_CHARPOLY: dict[FieldElement, RatPoly] = {}


def _char_poly(e: FieldElement) -> RatPoly:
    """Characteristic polynomial of multiplication by e (Faddeev-LeVerrier)."""
    got = _CHARPOLY.get(e)
    if got is not None:
        return got
    d = e.field.degree
    m = _mult_matrix(e)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[d] = Fraction(1)
    a = [row[:] for row in m]
    coeffs[d - 1] = -sum(a[i][i] for i in range(d))
    for k in range(2, d + 1):
        for i in range(d):
            a[i][i] += coeffs[d - k + 1]
        a = [
            [sum(m[i][t] * a[t][j] for t in range(d)) for j in range(d)]
            for i in range(d)
        ]
        coeffs[d - k] = -sum(a[i][i] for i in range(d)) / k
    out = RatPoly(tuple(coeffs), "y")
    _CHARPOLY[e] = out
    return out


def minimal_polynomial(e: FieldElement) -> RatPoly:
    """Monic minimal polynomial of e over Q, in the variable y.

    The characteristic polynomial of the multiplication-by-e map is a
    perfect power of the (irreducible) minimal polynomial, so the
    squarefree part is exactly what we want.  Degree divides d.
    """
    char = _char_poly(e)
    sq = squarefree_part(char.cleared())
    lead = sq.lc
    return RatPoly(tuple(Fraction(c, lead) for c in sq.coeffs), "y")


def norm_and_trace(e: FieldElement) -> tuple[Fraction, Fraction]:
    """Determinant and trace of multiplication by e on the whole field."""
    char = _char_poly(e)
    d = e.field.degree
    norm = char.coeffs[0] if d % 2 == 0 else -char.coeffs[0]
    trace = -char.coeffs[d - 1]
    return norm, trace


@dataclass(frozen=True)
class IntegralityCertificate:
    """Verdict on whether an element is an algebraic integer.

    The verdict is exactly "minimal polynomial has integer coefficients";
    the unit flag additionally requires |norm| = 1.
    """

    element: FieldElement
    min_poly: RatPoly
    is_integer: bool
    norm: Fraction
    is_unit: bool

    def to_json(self, context=None) -> dict:
        return {
            "element_minpoly": self.min_poly.to_json(),
            "is_integer": self.is_integer,
            "norm": str(self.norm),
            "is_unit": self.is_unit,
            "context": context,
        }


def is_algebraic_integer(e: FieldElement) -> IntegralityCertificate:
    mp = minimal_polynomial(e)
    integer = mp.is_integral
    norm, _ = norm_and_trace(e)
    return IntegralityCertificate(
        element=e,
        min_poly=mp,
        is_integer=integer,
        norm=norm,
        is_unit=integer and abs(norm) == 1,
    )


def is_unit(e: FieldElement) -> bool:
    """True iff e is an algebraic integer of norm +1 or -1."""
    return is_algebraic_integer(e).is_unit


# ---------------------------------------------------------------------------
# periodic orbits at rational parameters


@dataclass(frozen=True)
class OrbitInField:
    """One Galois orbit of exact period h for z^n + c, held in Q(z)."""

    n: int
    c: Fraction
    field: NumberField
    points: tuple[FieldElement, ...]
    multiplier: FieldElement


def periodic_orbit_in_field(n: int, c, h: int) -> list[OrbitInField]:
    """Orbits of exact period h of z^n + c at a rational parameter c.

    One OrbitInField per irreducible factor of the specialized dynatomic
    polynomial: the field it generates, the h orbit points computed
    in-field, and the cycle multiplier prod n * z_j^(n-1).

    Raises ParabolicCollisionError when the specialization has a repeated
    root, or when a factor's root turns out to have period below h (both
    happen exactly at parabolic parameters).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if h < 1:
        raise ValueError("h must be at least 1")
    c = _frac(c)
    phi = dynatomic(n, h)
    cols = phi.as_univariate_in("z")
    spec = RatPoly(tuple(Fraction(p(c)) for p in cols), "z")
    cleared = spec.cleared()
    fac = factor(cleared)
    if any(mult >= 2 for _, mult in fac.factors):
        raise ParabolicCollisionError(
            f"dynatomic polynomial has a repeated root at c = {c}"
        )
    orbits = []
    for p, _ in fac.factors:
        lead = p.lc
        modulus = RatPoly(tuple(Fraction(a, lead) for a in p.coeffs), "z")
        fld = NumberField(modulus, check=False)
        z1 = fld.generator()
        points = [z1]
        cur = z1
        for j in range(1, h):
            cur = cur ** n + c
            if cur == z1:
                raise ParabolicCollisionError(
                    f"root of period {j} < {h} inside the dynatomic factor "
                    f"at c = {c}"
                )
            points.append(cur)
        closes = points[-1] ** n + c
        assert closes == z1, "orbit failed to close after h steps"
        prod = fld.one()
        for z in points:
            prod = prod * z
        multiplier = (prod ** (n - 1)) * Fraction(n) ** h
        orbits.append(OrbitInField(n, c, fld, tuple(points), multiplier))
    return orbits


def _phi_pair(x: FieldElement, y: FieldElement, n: int) -> FieldElement:
    """(x^n - y^n)/(x - y) written as the telescoping sum, so no division."""
    total = x.field.zero()
    for a in range(n):
        total = total + x ** a * y ** (n - 1 - a)
    return total


@dataclass(frozen=True)
class OrbitUnitReport:
    """Cyclic difference quotients along one orbit and their unit status."""

    orbit: OrbitInField
    phi_values: tuple[FieldElement, ...]
    product_is_one: bool
    certificates: tuple[IntegralityCertificate, ...]


def dynamical_unit_check(
    n: int, c, h: int, certify_units: bool = True
) -> list[OrbitUnitReport]:
    """Check prod_j (z_j^n - z_{j+1}^n)/(z_j - z_{j+1}) = 1 on each orbit.

    The product is verified exactly in-field.  When c is an algebraic
    integer (here: an integer) each difference quotient also gets a unit
    certificate; pass certify_units=False to skip those, which matters in
    large-degree fields where minimal polynomials are the expensive part.
    """
    if h < 2:
        raise ValueError("the unit identity concerns orbits of period >= 2")
    c = _frac(c)
    reports = []
    for orbit in periodic_orbit_in_field(n, c, h):
        pts = orbit.points
        phis = tuple(
            _phi_pair(pts[j], pts[(j + 1) % h], n) for j in range(h)
        )
        prod = orbit.field.one()
        for v in phis:
            prod = prod * v
        certs = ()
        if certify_units and c.denominator == 1:
            certs = tuple(is_algebraic_integer(v) for v in phis)
        reports.append(
            OrbitUnitReport(
                orbit=orbit,
                phi_values=phis,
                product_is_one=prod == orbit.field.one(),
                certificates=certs,
            )
        )
    return reports


@dataclass(frozen=True)
class OrbitCongruences:
    """Integrality certificates for the multiplier congruences of one orbit.

    scaled_multiplier: mu / n^h, present when the parameter is integral.
    power_congruence: (mu^n - (-b)^((n-1)h)) / n, always computed.
    unit_congruence: (n^h - mu)^(n-1) / bhat, present only when mu is a
    unit; None elsewhere means "not applicable", not failure.
    """

    orbit: OrbitInField
    scaled_multiplier: IntegralityCertificate | None
    power_congruence: IntegralityCertificate
    unit_congruence: IntegralityCertificate | None


def congruence_certificates(n: int, c, h: int) -> list[OrbitCongruences]:
    """Certify the arithmetic congruences satisfied by cycle multipliers.

    Works at a rational parameter c of z^n + c.  The conjugate parameter
    b satisfies b^(n-1) = bhat = n^n c^(n-1), which is rational even when
    b itself is not; both the power congruence and the unit congruence
    are phrased through bhat so every value stays inside Q(z).  For the
    unit branch this uses: (n^h - mu)/b is an algebraic integer iff its
    (n-1)-st power (n^h - mu)^(n-1)/bhat is.
    """
    if h < 1:
        raise ValueError("h must be at least 1")
    c = _frac(c)
    bhat = Fraction(n) ** n * c ** (n - 1)
    sign = -1 if ((n - 1) * h) % 2 else 1
    out = []
    for orbit in periodic_orbit_in_field(n, c, h):
        mu = orbit.multiplier
        scaled = None
        if c.denominator == 1:
            scaled = is_algebraic_integer(mu / Fraction(n) ** h)
        power_val = (mu ** n - sign * bhat ** h) / n
        power = is_algebraic_integer(power_val)
        unit_branch = None
        if is_unit(mu) and bhat != 0:
            unit_val = (Fraction(n) ** h - mu) ** (n - 1) / bhat
            unit_branch = is_algebraic_integer(unit_val)
        out.append(
            OrbitCongruences(
                orbit=orbit,
                scaled_multiplier=scaled,
                power_congruence=power,
                unit_congruence=unit_branch,
            )
        )
    return out


def prime_to_n_test(min_poly, n: int) -> bool:
    """Whether an algebraic integer, given by its minimal polynomial, is
    coprime to n.

    Since algebraic integers are stable under conjugation, the element
    shares a prime factor with n exactly when gcd(|Norm|, n) > 1, and the
    norm is read off the monic integer minimal polynomial as +-p(0).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if isinstance(min_poly, RatPoly):
        min_poly = min_poly.to_intpoly()
    if min_poly.degree < 1:
        raise ValueError("minimal polynomial must have degree >= 1")
    if not min_poly.is_monic:
        raise ValueError("an algebraic integer has a monic minimal polynomial")
    return math.gcd(abs(min_poly.constant), n) == 1
