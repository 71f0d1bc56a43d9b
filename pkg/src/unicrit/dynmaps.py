"""Polynomial families attached to the unicritical maps z^n + c.

Everything here is exact integer arithmetic.  Four parameter coordinates
run through the module: c for the form z^n + c, b for the conjugate form
(w^n + b)/n, and the power coordinates chat = c^(n-1) and
bhat = b^(n-1) = n^n * chat, which is where the parameter polynomials
naturally live.

Construction functions are pure and deterministic.  Results are memoized
in module-level tables; a racing double construction writes identical
values, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .polycore import (
    BiPoly,
    IntPoly,
    cyclotomic,
    gcd_fast,
    moebius,
    poly_from_json,
    poly_to_json,
    resultant,
    root_power_transform,
    root_scale_transform,
    squarefree_part,
)
from .polycore import _newton_interpolate_fractions

__all__ = [
    "COORDINATES",
    "DEFAULT_DEGREE_CAP",
    "NORMAL_FORMS",
    "CriticalOrbitPoly",
    "DegreeCapError",
    "IteratePair",
    "MapFamily",
    "ParamPolynomial",
    "SpecialCaseError",
    "coord_transform",
    "critical_orbit_poly",
    "critical_value_poly",
    "dynatomic",
    "fixed_point_parabolic",
    "gleason_poly",
    "iterate_map",
    "iterate_poly_gb",
    "misiurewicz_poly",
    "multiplier_poly",
    "multiplier_resultant",
    "parabolic_param_poly",
    "periodicity_poly",
]

DEFAULT_DEGREE_CAP = 4096

COORDINATES = ("c", "chat", "b", "bhat")
NORMAL_FORMS = ("f_c", "g_b", "F_chat")


class DegreeCapError(Exception):
    """A construction would exceed the configured degree cap."""

    def __init__(self, needed: int, cap: int):
        super().__init__(
            f"construction needs degree {needed}, which exceeds the cap {cap}"
        )
        self.needed = needed
        self.cap = cap


class SpecialCaseError(ValueError):
    """The requested object degenerates to a point with no polynomial."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


def _check_cap(needed: int, cap: int) -> None:
    if needed > cap:
        raise DegreeCapError(needed, cap)


def _validate_n(n: int) -> None:
    _require(isinstance(n, int) and n >= 2, "map degree n must be an integer >= 2")


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class MapFamily:
    """Degree n together with a choice of normal form.

    The three forms are conjugate: w = n^(1/(n-1)) z carries z^n + c to
    (w^n + b)/n with b = n^(n/(n-1)) c, and zeta = z / f_c(0)-scaling
    carries the critical orbit to that of chat*zeta^n + 1.
    """

    n: int
    form: str = "f_c"

    def __post_init__(self):
        _validate_n(self.n)
        _require(self.form in NORMAL_FORMS, f"unknown normal form {self.form!r}")


@dataclass(frozen=True)
class IteratePair:
    """k-th iterate of (w^n + b)/n written as poly / denom.

    poly is monic of degree n^k in w and degree n^(k-1) in b;
    denom = n^(1 + n + ... + n^(k-1)).
    """

    poly: BiPoly
    denom: int
    k: int


@dataclass(frozen=True)
class CriticalOrbitPoly:
    """k-th critical orbit polynomial in chat: monic, constant term +1."""

    poly: IntPoly
    k: int
    n: int


@dataclass(frozen=True)
class ParamPolynomial:
    """Primitive positive-lc polynomial cutting out a parameter locus."""

    poly: IntPoly
    coordinate: str
    n: int
    provenance: Mapping[str, object]

    def __post_init__(self):
        _validate_n(self.n)
        _require(self.coordinate in COORDINATES, f"unknown coordinate {self.coordinate!r}")
        p = self.poly
        _require(not p.is_zero, "parameter polynomial must be nonzero")
        _require(p.var == self.coordinate, "polynomial variable must match the coordinate tag")
        _require(
            p.content == 1 and p.lc > 0,
            "parameter polynomial must be primitive with positive leading coefficient",
        )
        object.__setattr__(self, "provenance", dict(self.provenance))

    @property
    def degree(self) -> int:
        return self.poly.degree

    def to_json(self) -> dict:
        out = poly_to_json(self.poly)
        out["coordinate"] = self.coordinate
        out["n"] = self.n
        out["provenance"] = dict(self.provenance)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ParamPolynomial":
        return cls(poly_from_json(obj), obj["coordinate"], obj["n"], obj["provenance"])


# ---------------------------------------------------------------------------
# memo tables (values immutable, writes idempotent)

_ITERATE_FC: dict = {}
_ITERATE_GB: dict = {}
_ORBIT: dict = {}
_CRITICAL_VALUE: dict = {}
_DYNATOMIC: dict = {}
_MULTIPLIER: dict = {}
_MULT_RES: dict = {}
_GLEASON: dict = {}
_MIS_RAW: dict = {}
_MISIUREWICZ: dict = {}
_PARABOLIC: dict = {}


def _divisors(h: int) -> list[int]:
    return [d for d in range(1, h + 1) if h % d == 0]


# ---------------------------------------------------------------------------
# iterates


def _iterate_fc(n: int, k: int) -> BiPoly:
    got = _ITERATE_FC.get((n, k))
    if got is None:
        if k == 1:
            got = BiPoly(((0,) * n + (1,), (1,)), "c", "z")  # z^n + c
        else:
            got = _iterate_fc(n, k - 1) ** n + BiPoly.gen("c", "c", "z")
        _ITERATE_FC[(n, k)] = got
    return got


def iterate_map(n: int, k: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> BiPoly:
    """k-th iterate of z^n + c as an exact polynomial in (c, z)."""
    _validate_n(n)
    _require(k >= 1, "iterate index k must be >= 1")
    _check_cap(n ** k, degree_cap)
    return _iterate_fc(n, k)


def _iterate_gb(n: int, k: int) -> tuple[BiPoly, int]:
    got = _ITERATE_GB.get((n, k))
    if got is None:
        if k == 1:
            got = (BiPoly(((0,) * n + (1,), (1,)), "b", "w"), n)  # w^n + b
        else:
            prev, nk = _iterate_gb(n, k - 1)
            poly = prev ** n + BiPoly.gen("b", "b", "w") * nk ** n
            got = (poly, n * nk ** n)
        _ITERATE_GB[(n, k)] = got
    return got


def iterate_poly_gb(n: int, k: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> IteratePair:
    """Numerator P_k and denominator N_k of the k-th iterate of (w^n + b)/n.

    P_1 = w^n + b, N_1 = n, and then P_{k+1} = P_k^n + N_k^n b with
    N_{k+1} = n N_k^n, keeping every coefficient an exact integer.
    """
    _validate_n(n)
    _require(k >= 1, "iterate index k must be >= 1")
    _check_cap(n ** k, degree_cap)
    poly, denom = _iterate_gb(n, k)
    return IteratePair(poly, denom, k)


def periodicity_poly(n: int, h: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> BiPoly:
    """P_h(b, w) - N_h w, whose w-roots are the period-h points of (w^n + b)/n."""
    pair = iterate_poly_gb(n, h, degree_cap)
    return pair.poly - BiPoly.gen("w", "b", "w") * pair.denom


def _orbit(n: int, k: int) -> IntPoly:
    got = _ORBIT.get((n, k))
    if got is None:
        if k == 1:
            got = IntPoly((1,), "chat")
        else:
            got = IntPoly.gen("chat") * _orbit(n, k - 1) ** n + 1
        _ORBIT[(n, k)] = got
    return got


def critical_orbit_poly(
    n: int, k: int, degree_cap: int = DEFAULT_DEGREE_CAP
) -> CriticalOrbitPoly:
    """k-th critical orbit polynomial: P_1 = 1, P_{k+1} = chat P_k^n + 1.

    Satisfies f_c^k(0) = c * P_k(c^(n-1)); monic with constant term +1.
    """
    _validate_n(n)
    _require(k >= 1, "orbit index k must be >= 1")
    _check_cap((n ** (k - 1) - 1) // (n - 1), degree_cap)
    return CriticalOrbitPoly(_orbit(n, k), k, n)


def _critical_value(n: int, k: int) -> IntPoly:
    # f^k(0) as a polynomial in c: a_1 = c, a_{j+1} = a_j^n + c
    got = _CRITICAL_VALUE.get((n, k))
    if got is None:
        if k == 1:
            got = IntPoly.gen("c")
        else:
            got = _critical_value(n, k - 1) ** n + IntPoly.gen("c")
        _CRITICAL_VALUE[(n, k)] = got
    return got


def critical_value_poly(n: int, k: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> IntPoly:
    """f_c^k(0) as an exact polynomial in c."""
    _validate_n(n)
    _require(k >= 1, "iterate index k must be >= 1")
    _check_cap(n ** (k - 1), degree_cap)
    return _critical_value(n, k)


# ---------------------------------------------------------------------------
# dynatomic polynomials


def _dynatomic(n: int, h: int, form: str) -> BiPoly:
    got = _DYNATOMIC.get((n, h, form))
    if got is not None:
        return got

    def term(d: int) -> BiPoly:
        if form == "f_c":
            return _iterate_fc(n, d) - BiPoly.gen("z", "c", "z")
        poly, denom = _iterate_gb(n, d)
        return poly - BiPoly.gen("w", "b", "w") * denom

    plus = [d for d in _divisors(h) if moebius(h // d) == 1]
    minus = [d for d in _divisors(h) if moebius(h // d) == -1]
    num = term(plus[0])
    for d in plus[1:]:
        num = num * term(d)
    for d in sorted(minus, reverse=True):
        num = num.divexact(term(d))  # exact by construction; raises otherwise
    _DYNATOMIC[(n, h, form)] = num
    return num


def dynatomic(
    n: int, h: int, form: str = "f_c", degree_cap: int = DEFAULT_DEGREE_CAP
) -> BiPoly:
    """Exact-period-h polynomial via the Moebius product over divisors of h.

    For form "f_c" this is prod_{d|h} (f^d(z) - z)^{mu(h/d)} in (c, z); for
    form "g_b" the cleared version prod (P_d - N_d w)^{mu(h/d)} in (b, w).
    The divisions are exact; prod_{d|h} Phi_d recovers iterate_h - var.
    """
    _validate_n(n)
    _require(h >= 1, "period h must be >= 1")
    _require(form in ("f_c", "g_b"), f"unknown dynatomic form {form!r}")
    _check_cap(n ** h, degree_cap)
    return _dynatomic(n, h, form)


# ---------------------------------------------------------------------------
# multipliers


def _multiplier(n: int, h: int) -> BiPoly:
    got = _MULTIPLIER.get((n, h))
    if got is None:
        prod = BiPoly.gen("z", "c", "z")
        for i in range(1, h):
            prod = prod * _iterate_fc(n, i)
        got = prod ** (n - 1) * n ** h
        _MULTIPLIER[(n, h)] = got
    return got


def multiplier_poly(n: int, h: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> BiPoly:
    """Derivative of the h-th iterate of z^n + c with respect to z.

    Chain rule product form n^h (z f(z) ... f^{h-1}(z))^(n-1); identical to
    differentiating iterate_map(n, h) directly.
    """
    _validate_n(n)
    _require(h >= 1, "period h must be >= 1")
    _check_cap(n ** h, degree_cap)
    return _multiplier(n, h)


def multiplier_resultant(
    n: int, h: int, degree_cap: int = DEFAULT_DEGREE_CAP
) -> BiPoly:
    """q(c, mu) = Res_z(Phi_h(c, z), mu - (f^h)'(z)).

    Each exact-period-h orbit with multiplier mu0 contributes (mu - mu0)^h,
    so q is monic of degree nu(h) in mu.  Computed by evaluating c at
    integer points, taking bivariate resultants in (mu, z), and
    interpolating back; both steps are exact.
    """
    _validate_n(n)
    _require(h >= 1, "period h must be >= 1")
    _check_cap(n ** h, degree_cap)
    got = _MULT_RES.get((n, h))
    if got is not None:
        return got
    phi = _dynatomic(n, h, "f_c")
    W = _multiplier(n, h)
    dmu = phi.degree("z")
    dbound = dmu * W.degree("c") + W.degree("z") * phi.degree("c")
    pts: list[int] = [0]
    t = 1
    while len(pts) < dbound + 1:
        pts.append(t)
        if len(pts) < dbound + 1:
            pts.append(-t)
        t += 1
    vals = []
    for x in pts:
        A = BiPoly.from_inner_poly(phi.eval_at("c", x), outer="mu")
        B = BiPoly.gen("mu", "mu", "z") - BiPoly.from_inner_poly(
            W.eval_at("c", x), outer="mu"
        )
        vals.append(resultant(A, B, eliminate="z"))
    cols = [
        _newton_interpolate_fractions(pts, [v.coeff(j) for v in vals], "c")
        for j in range(dmu + 1)
    ]
    got = BiPoly.from_univariate(cols, var="mu", outer="c", inner="mu")
    _MULT_RES[(n, h)] = got
    return got


# ---------------------------------------------------------------------------
# coordinate transforms

_POWER_GROUP = {"c": "chat", "b": "bhat"}  # x -> x^(n-1)
# directed transform steps available for n >= 3
_TRANSFORM_STEPS = {
    ("c", "chat"): ("power",),
    ("c", "bhat"): ("power", "scale_up"),
    ("b", "bhat"): ("power",),
    ("b", "chat"): ("power", "scale_down"),
    ("chat", "bhat"): ("scale_up",),
    ("bhat", "chat"): ("scale_down",),
}


def coord_transform(p: ParamPolynomial, coordinate: str) -> ParamPolynomial:
    """Rewrite a parameter polynomial in another coordinate.

    Available moves: c -> chat and b -> bhat take (n-1)-st powers of the
    roots; chat <-> bhat scale the roots by n^n.  For n = 2 the power
    coordinates coincide with the plain ones and every direction works
    (c <-> b is the rational scaling by 4).  For n >= 3 there is no path
    back down to c or b, and c <-> b itself would need the irrational
    scale n^(n/(n-1)), so those requests are rejected.
    """
    _require(coordinate in COORDINATES, f"unknown coordinate {coordinate!r}")
    if coordinate == p.coordinate:
        return p
    n = p.n
    poly = p.poly
    if n == 2:
        grp_src = 0 if p.coordinate in ("c", "chat") else 1
        grp_dst = 0 if coordinate in ("c", "chat") else 1
        if grp_src < grp_dst:
            poly = root_scale_transform(poly, Fraction(4))
        elif grp_src > grp_dst:
            poly = root_scale_transform(poly, Fraction(1, 4))
    else:
        steps = _TRANSFORM_STEPS.get((p.coordinate, coordinate))
        if steps is None:
            raise ValueError(
                f"no transform path from {p.coordinate!r} to {coordinate!r} for n = {n}"
            )
        for step in steps:
            if step == "power":
                poly = squarefree_part(root_power_transform(poly, n - 1))
            elif step == "scale_up":
                poly = root_scale_transform(poly, Fraction(n ** n))
            else:
                poly = root_scale_transform(poly, Fraction(1, n ** n))
    return ParamPolynomial(
        poly.rename(coordinate).primitive_part(), coordinate, n, p.provenance
    )


def _stretch(p: IntPoly, k: int) -> IntPoly:
    # substitute x^k for x: satisfied by any k-th root of a root of p
    if k == 1:
        return p
    coeffs = [0] * (p.degree * k + 1)
    for i, a in enumerate(p.coeffs):
        coeffs[i * k] = a
    return IntPoly(coeffs, p.var)


# ---------------------------------------------------------------------------
# parameter polynomials


def _strip_factors(D: IntPoly, lower: IntPoly) -> IntPoly:
    """Divide out of D, repeatedly, every factor shared with `lower`."""
    if lower.degree < 1:
        return D
    g = gcd_fast(D, lower)
    while g.degree > 0:
        D = D.divexact(g)
        g = gcd_fast(D, lower)
    return D


def _gleason(n: int, h: int, chat_form: bool) -> IntPoly:
    got = _GLEASON.get((n, h, chat_form))
    if got is None:
        build = _orbit if chat_form else _critical_value
        D = build(n, h)
        for h2 in _divisors(h)[:-1]:
            D = _strip_factors(D, build(n, h2))
        got = D.primitive_part()
        _GLEASON[(n, h, chat_form)] = got
    return got


def gleason_poly(
    n: int, h: int, coordinate: str = "c", degree_cap: int = DEFAULT_DEGREE_CAP
) -> ParamPolynomial:
    """Parameters where the critical point itself has exact period h.

    In coordinate c: f^h(0) with every factor shared with a lower f^{h'}(0),
    h' | h, removed by exact division.  In coordinate chat the same
    procedure runs on the critical orbit polynomials; it needs h >= 2,
    since for h = 1 the locus is the single point c = 0, which the power
    coordinates cannot see.
    """
    _validate_n(n)
    _require(h >= 1, "period h must be >= 1")
    _require(coordinate in COORDINATES, f"unknown coordinate {coordinate!r}")
    prov = {"kind": "gleason", "h": h}
    if coordinate == "c":
        _check_cap(n ** (h - 1), degree_cap)
        return ParamPolynomial(_gleason(n, h, False), "c", n, prov)
    if h == 1:
        raise SpecialCaseError(
            "period 1 for the critical point means c = 0, a single point with "
            "no polynomial in the power coordinates; use coordinate 'c'"
        )
    _check_cap((n ** (h - 1) - 1) // (n - 1), degree_cap)
    base = ParamPolynomial(_gleason(n, h, True), "chat", n, prov)
    return base if coordinate == "chat" else coord_transform(base, coordinate)


def _misiurewicz_raw(n: int, t: int, h: int, tau: int) -> IntPoly:
    got = _MIS_RAW.get((n, t, h, tau))
    if got is None:
        psi = cyclotomic(tau)
        d = psi.degree
        A = _orbit(n, t + h)
        B = _orbit(n, t)
        S = IntPoly.zero("chat")
        for i in range(d + 1):
            if psi.coeff(i):
                S = S + A ** i * B ** (d - i) * psi.coeff(i)
        _MIS_RAW[(n, t, h, tau)] = S
        got = S
    return got


def _misiurewicz(n: int, t: int, h: int, tau: int) -> IntPoly:
    got = _MISIUREWICZ.get((n, t, h, tau))
    if got is None:
        D = _misiurewicz_raw(n, t, h, tau)
        for t2 in range(1, t + 1):
            for h2 in _divisors(h):
                if (t2, h2) != (t, h):
                    D = _strip_factors(D, _misiurewicz_raw(n, t2, h2, tau))
        got = squarefree_part(D)
        _MISIUREWICZ[(n, t, h, tau)] = got
    return got


def misiurewicz_poly(
    n: int,
    t: int,
    h: int,
    tau: int,
    coordinate: str = "chat",
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ParamPolynomial:
    """Parameters whose critical orbit becomes periodic after t >= 1 steps.

    The defining condition is that the two orbit points P_{t+h} and P_t
    differ by a primitive tau-th root of unity factor in the linearizing
    coordinate, encoded by the homogenized cyclotomic
    S = P_t^phi(tau) Psi_tau(P_{t+h} / P_t), an exact integer polynomial in
    chat.  For n prime and tau = n this is the sum P_{t+h}^(n-1) + ... +
    P_t^(n-1), monic with constant term n.  Factors shared with any lower
    cell (t' <= t, h' | h) are removed by iterated exact gcd division and
    the result is made squarefree.
    """
    _validate_n(n)
    _require(t >= 1, "transient time t must be >= 1")
    _require(h >= 1, "eventual period h must be >= 1")
    _require(tau > 1 and n % tau == 0, "tau must be a divisor of n with tau > 1")
    _require(coordinate in COORDINATES, f"unknown coordinate {coordinate!r}")
    psi_deg = cyclotomic(tau).degree
    _check_cap(psi_deg * (n ** (t + h - 1) - 1) // (n - 1), degree_cap)
    pp = ParamPolynomial(
        _misiurewicz(n, t, h, tau),
        "chat",
        n,
        {"kind": "misiurewicz", "t": t, "h": h, "tau": tau},
    )
    return pp if coordinate == "chat" else coord_transform(pp, coordinate)


def _parabolic(n: int, h: int, m: int) -> IntPoly:
    got = _PARABOLIC.get((n, h, m))
    if got is None:
        phi = _dynatomic(n, h, "f_c")
        W = _multiplier(n, h)
        psi = cyclotomic(m)
        B = BiPoly.const(psi.coeff(psi.degree), "c", "z")
        for i in range(psi.degree - 1, -1, -1):
            B = B * W + psi.coeff(i)
        E = resultant(phi, B, eliminate="z")
        got = squarefree_part(E)
        _PARABOLIC[(n, h, m)] = got
    return got


def parabolic_param_poly(
    n: int,
    h: int,
    m: int,
    coordinate: str = "c",
    degree_cap: int = DEFAULT_DEGREE_CAP,
) -> ParamPolynomial:
    """Parameters where some exact-period-h orbit has multiplier a
    primitive m-th root of unity.

    Radical of the elimination of z from Phi_h and Psi_m((f^h)'), which
    equals the radical of Res_mu(q(c, mu), Psi_m(mu)) for the multiplier
    resultant q.  Squarefree and primitive, but not irreducible in
    general: the (mu - mu0)^h orbit structure and orbit merges at
    bifurcation parameters can contribute extra factors (for m = 1, the
    cells (h', m') with h' m' = h merge in).  Callers pick factors.

    The associated ray period is r = h * m.  Coordinate b is produced as a
    polynomial satisfied by b via bhat = b^(n-1).
    """
    _validate_n(n)
    _require(h >= 1, "period h must be >= 1")
    _require(m >= 1, "root-of-unity order m must be >= 1")
    _require(coordinate in COORDINATES, f"unknown coordinate {coordinate!r}")
    _check_cap(n ** h, degree_cap)
    native = ParamPolynomial(
        _parabolic(n, h, m), "c", n, {"kind": "parabolic", "h": h, "m": m}
    )
    if coordinate == "c":
        return native
    if coordinate == "b" and n > 2:
        bhat = coord_transform(native, "bhat")
        return ParamPolynomial(
            _stretch(bhat.poly, n - 1).rename("b"), "b", n, native.provenance
        )
    return coord_transform(native, coordinate)


def fixed_point_parabolic(n: int, m: int) -> ParamPolynomial:
    """Fixed-point parabolic parameters in bhat, by direct elimination.

    A fixed point of (w^n + b)/n with multiplier mu satisfies
    w^(n-1) = mu and b = (n - mu) w, hence bhat = mu (n - mu)^(n-1).
    Eliminating mu against Psi_m gives the polynomial for multiplier a
    primitive m-th root of unity; must agree with
    parabolic_param_poly(n, 1, m, "bhat").
    """
    _validate_n(n)
    _require(m >= 1, "root-of-unity order m must be >= 1")
    base = IntPoly((n, -1), "mu") ** (n - 1) * IntPoly.gen("mu")
    A = BiPoly.gen("bhat", "bhat", "mu") - BiPoly.from_inner_poly(base, outer="bhat")
    B = BiPoly.from_inner_poly(cyclotomic(m, "mu"), outer="bhat")
    E = resultant(A, B, eliminate="mu")
    return ParamPolynomial(
        squarefree_part(E).rename("bhat"),
        "bhat",
        n,
        {"kind": "other", "source": "fixed_point_parabolic", "m": m},
    )
