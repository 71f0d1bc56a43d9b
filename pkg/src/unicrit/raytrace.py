"""Numeric external-ray tracing in the parameter plane of z^n + c.

The exact machinery elsewhere in the package predicts where rational
rays land (roots of parabolic and preperiodic parameter polynomials);
this module supplies the independent numeric side.  A ray of angle
theta is continued inward along decreasing potential t by solving

    f_c^K(c) = exp(n^K (t + 2 pi i theta))

for c with Newton's method, where the depth K is chosen so the K-th
iterate of the critical value sits in a fixed escape annulus.  Solving
this equation places c on the true ray up to a potential/angle
perturbation of relative size exp(-(n-1) tau) / n^K, which decays to
nothing as t -> 0, so landing extrapolation is unaffected by the
truncation.

Everything here is floating point (mpmath, configurable precision);
the symbolic candidates it is matched against are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .dynmaps import ParamPolynomial
from .factorz import factor
from .polycore import IntPoly, poly_to_json

__all__ = [
    "Angle",
    "ContinuityError",
    "LandingReport",
    "NewtonDivergenceError",
    "NonConvergenceError",
    "PrecisionExhaustedError",
    "RayPath",
    "RayTraceError",
    "angle_orbit",
    "complex_roots",
    "land_and_match",
    "trace_param_ray",
]

# escape annulus: depth K is chosen so n^K t lands in [TAU_ESCAPE, n*TAU_ESCAPE)
TAU_ESCAPE = 6.0

_NEWTON_MAX_ITERS = 60
_MAX_STEP_HALVINGS = 10
_CONTINUITY_FACTOR = 10.0


class RayTraceError(Exception):
    """Base for ray-continuation failures."""


class NewtonDivergenceError(RayTraceError):
    pass


class PrecisionExhaustedError(RayTraceError):
    pass


class ContinuityError(RayTraceError):
    pass


class NonConvergenceError(Exception):
    """Root isolation did not converge in the allotted iterations."""


@dataclass(frozen=True)
class Angle:
    """Rational angle p/q of a turn, reduced, with 0 <= p < q."""

    p: int
    q: int

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise TypeError("angle numerator and denominator must be int")
        if self.q < 1 or not 0 <= self.p < self.q:
            raise ValueError("angle must satisfy 0 <= p < q")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"angle {self.p}/{self.q} is not reduced")

    @classmethod
    def parse(cls, text: str) -> "Angle":
        body = text.strip()
        if "/" in body:
            num, _, den = body.partition("/")
            frac = Fraction(int(num), int(den))
        else:
            frac = Fraction(int(body), 1)
        return cls(frac.numerator, frac.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


def angle_orbit(angle: Angle, n: int) -> tuple[int, int]:
    """(preperiod, period) of p/q under t -> n*t mod 1, exactly.

    >>> angle_orbit(Angle(1, 7), 2)
    (0, 3)
    >>> angle_orbit(Angle(9, 56), 2)
    (3, 3)
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    seen: dict[Fraction, int] = {}
    t = angle.value
    k = 0
    while t not in seen:
        seen[t] = k
        t = (n * t) % 1
        k += 1
    return seen[t], k - seen[t]


@dataclass(frozen=True)
class RayPath:
    """Sampled external ray: (potential, c) pairs at decreasing potential."""

    angle: Angle
    n: int
    points: tuple
    precision_bits: int

    def __post_init__(self):
        pots = [t for t, _ in self.points]
        if any(b >= a for a, b in zip(pots, pots[1:])):
            raise ValueError("ray potentials must be strictly decreasing")

    @property
    def endpoint(self):
        return self.points[-1][1]

    def to_json(self) -> dict:
        return {
            "angle": str(self.angle),
            "n": self.n,
            "precision_bits": self.precision_bits,
            "points": [
                {"potential": _real_str(t, self.precision_bits),
                 "c": _complex_json(c, self.precision_bits)}
                for t, c in self.points
            ],
        }


def _real_str(x, bits: int) -> str:
    return mp.nstr(mp.mpf(x), max(int(bits * 0.3013) + 2, 8))


def _complex_json(z, bits: int) -> dict:
    z = mp.mpc(z)
    return {
        "re": _real_str(z.real, bits),
        "im": _real_str(z.imag, bits),
        "bits": bits,
    }


def _depth(n: int, t, tau: float = TAU_ESCAPE) -> int:
    if t >= tau:
        return 0
    return max(0, math.ceil(math.log(tau / float(t), n)))


def _ray_target(n: int, angle: Angle, t, K: int):
    # reduce the angle mod 1 in exact integer arithmetic before going float,
    # since n^K p / q loses all angular precision once n^K is large
    phase_num = (pow(n, K, angle.q) * angle.p) % angle.q
    re = (n ** K) * mp.mpf(t)
    im = 2 * mp.pi * mp.mpf(phase_num) / angle.q
    return mp.exp(mp.mpc(re, im))


def _solve_ray_point(n: int, angle: Angle, t, c0, bits: int,
                     tau: float = TAU_ESCAPE):
    """Newton-solve f_c^K(c) = exp(n^K (t + 2 pi i angle)) starting at c0."""
    K = _depth(n, t, tau)
    target = _ray_target(n, angle, t, K)
    tol = abs(target) * mp.mpf(2) ** -(bits // 2)
    step_floor = mp.mpf(2) ** (8 - bits)
    c = mp.mpc(c0) if c0 is not None else target
    best_c, best_f = c, mp.inf
    for _ in range(_NEWTON_MAX_ITERS):
        z, dz = c, mp.mpc(1)
        for _ in range(K):
            dz = n * z ** (n - 1) * dz + 1
            z = z ** n + c
        f = abs(z - target)
        if f < best_f:
            best_c, best_f = c, f
        if f <= tol:
            return c
        if dz == 0:
            raise NewtonDivergenceError(f"critical Newton derivative at t={t}")
        step = (z - target) / dz
        if abs(step) <= step_floor * (1 + abs(c)):
            break  # cannot move at this precision
        c = c - step
    # deep orbits lose ~2 bits per level to cancellation, so accept a
    # residual within a few orders of the requested tolerance
    if best_f <= tol * 2 ** 24:
        return best_c
    if best_f <= mp.sqrt(tol * abs(target)):
        raise PrecisionExhaustedError(
            f"Newton stalled at residual {mp.nstr(best_f, 5)} with "
            f"{bits} bits at potential {mp.nstr(mp.mpf(t), 8)}"
        )
    raise NewtonDivergenceError(
        f"no convergence in {_NEWTON_MAX_ITERS} iterations at potential "
        f"{mp.nstr(mp.mpf(t), 8)} (best residual {mp.nstr(best_f, 5)})"
    )


def _solve_with_retries(n, angle, t_prev, t, c_prev, c_older, bits):
    """Continue from (t_prev, c_prev) to potential t, halving the potential
    step on Newton divergence.  Returns the list of accepted (t, c) points
    (intermediate retry levels included)."""
    guess = c_prev
    if c_older is not None and c_prev is not None:
        guess = 2 * c_prev - c_older  # linear predictor along the schedule
    try:
        return [(t, _solve_ray_point(n, angle, t, guess, bits))]
    except NewtonDivergenceError:
        pass
    points = []
    lo = t
    for _ in range(_MAX_STEP_HALVINGS):
        mid = mp.sqrt(t_prev * lo) if t_prev is not None else lo
        try:
            c_mid = _solve_ray_point(n, angle, mid, c_prev, bits)
        except NewtonDivergenceError:
            lo = mid
            continue
        points.append((mid, c_mid))
        t_prev, c_prev = mid, c_mid
        try:
            points.append((t, _solve_ray_point(n, angle, t, c_prev, bits)))
            return points
        except NewtonDivergenceError:
            lo = t
    raise NewtonDivergenceError(
        f"ray {angle} (n={n}): Newton diverged at potential "
        f"{mp.nstr(mp.mpf(t), 8)} after {_MAX_STEP_HALVINGS} step halvings"
    )


def trace_param_ray(
    n: int,
    angle: Angle,
    potential_start: float = 32.0,
    potential_end: float = 1e-8,
    steps_per_halving: int = 12,
    precision_bits: int = 256,
) -> RayPath:
    """Continue the external ray of the given angle from potential_start
    down to potential_end.

    Newton divergence at a level triggers geometric step halving (fatal
    after a fixed retry budget); a jump bigger than 10x the previous
    accepted step aborts with ContinuityError rather than risk hopping
    to a neighboring ray.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if not potential_start > potential_end > 0:
        raise ValueError("need potential_start > potential_end > 0")
    with mp.workprec(precision_bits):
        start = mp.mpf(potential_start)
        end = mp.mpf(potential_end)
        ratio = mp.mpf(2) ** (mp.mpf(-1) / steps_per_halving)
        points = [(start, _solve_ray_point(n, angle, start, None, precision_bits))]
        t = start
        while t > end:
            t = max(t * ratio, end)
            t_prev, c_prev = points[-1]
            c_older = points[-2][1] if len(points) >= 2 else None
            new_pts = _solve_with_retries(
                n, angle, t_prev, t, c_prev, c_older, precision_bits
            )
            for t_new, c_new in new_pts:
                if len(points) >= 2:
                    prev_step = abs(points[-1][1] - points[-2][1])
                    jump = abs(c_new - points[-1][1])
                    if jump > _CONTINUITY_FACTOR * prev_step and jump > 1e-12:
                        raise ContinuityError(
                            f"ray {angle} (n={n}): jump {mp.nstr(jump, 5)} at "
                            f"potential {mp.nstr(mp.mpf(t_new), 8)} exceeds "
                            f"{_CONTINUITY_FACTOR}x the local step"
                        )
                points.append((t_new, c_new))
    return RayPath(angle, n, tuple(points), precision_bits)


def _neville_zero(samples):
    """Polynomial extrapolation of c as a function of u = 1/log(1/t) to u=0."""
    us = [1 / mp.log(1 / t) for t, _ in samples]
    tab = [c for _, c in samples]
    m = len(tab)
    for level in range(1, m):
        tab = [
            (-us[i] * tab[i + 1] + us[i + level] * tab[i])
            / (us[i + level] - us[i])
            for i in range(m - level)
        ]
    return tab[0]


_TAU_POLISH = 18.0


def _extrapolate_landing(n, angle, path, agree_tol: float = 1e-9,
                         window: int = 8, max_nodes: int = 24):
    """Landing estimate as t -> 0, rate-agnostic over the landing types
    that occur here.

    Measured approach laws: Misiurewicz landings converge like t itself;
    parabolic landings only like powers of u = 1/log(1/t) (the escape
    time through the parabolic bottleneck grows like 1/sqrt(c - c*), so
    the potential is exponentially small in it), with a log-periodic
    component whose period is the ray period r.  c(u) sampled at
    potentials spaced by the exact factor n^-r is analytic in u at
    u = 0 with the oscillation frozen, so the ray is continued deeper
    past the traced end and extrapolated to u = 0 by Neville's scheme
    on those aligned nodes.  Depth is adaptive: stop once consecutive
    window extrapolations agree, so fast landings stop shallow and
    parabolic ones go deep.

    Two numerical guard rails, both load-bearing: the continuation step
    keeps the depth-K iterate's modulus factor bounded (a full n^-r jump
    would hop to a neighboring ray), and each node is re-solved at a
    deeper escape radius to shrink the truncation bias of the escape
    approximation before it enters the divided differences.
    """
    bits = path.precision_bits
    r = angle_orbit(angle, n)[1]
    steps = max(1, math.ceil(4 * r * n * math.log(n)))
    with mp.workprec(bits):
        ratio = mp.mpf(n) ** (mp.mpf(-r) / steps)
        prev = None  # the traced path ends on a clamped, shorter step
        cur = path.points[-1]
        nodes = [
            (cur[0], _solve_ray_point(n, angle, cur[0], cur[1], bits, _TAU_POLISH))
        ]
        est, prev_est = nodes[-1][1], None
        while len(nodes) < max_nodes:
            try:
                for _ in range(steps):
                    t = cur[0] * ratio
                    guess = 2 * cur[1] - prev[1] if prev is not None else cur[1]
                    c = _solve_ray_point(n, angle, t, guess, bits)
                    if prev is not None:
                        jump = abs(c - cur[1])
                        if jump > _CONTINUITY_FACTOR * abs(cur[1] - prev[1]) + 1e-20:
                            raise ContinuityError(
                                f"ray {angle} (n={n}): jump {mp.nstr(jump, 5)} "
                                f"at potential {mp.nstr(t, 8)} during landing "
                                "descent"
                            )
                    prev, cur = cur, (t, c)
                nodes.append(
                    (cur[0],
                     _solve_ray_point(n, angle, cur[0], cur[1], bits, _TAU_POLISH))
                )
            except PrecisionExhaustedError:
                # the landing is already resolved to working precision;
                # extrapolate from what we have
                if len(nodes) < 3:
                    raise
                break
            if len(nodes) >= window and len(nodes) % 2 == 0:
                est = _neville_zero(nodes[-window:])
                if prev_est is not None and abs(est - prev_est) <= agree_tol:
                    return est
                prev_est = est
        return _neville_zero(nodes[-window:]) if len(nodes) >= 3 else est


def complex_roots(p: IntPoly, precision_bits: int = 256) -> list:
    """All complex roots of a squarefree integer polynomial, deterministically
    ordered by (real, imaginary) part, residual-checked."""
    if p.degree < 1:
        return []
    with mp.workprec(precision_bits + 64):
        coeffs = list(reversed(p.coeffs))
        try:
            roots = mp.polyroots(coeffs, maxsteps=200, extraprec=precision_bits)
        except mp.libmp.NoConvergence as exc:
            raise NonConvergenceError(str(exc)) from exc
        roots = sorted((mp.mpc(r) for r in roots), key=lambda r: (r.real, r.imag))
        eps = mp.mpf(2) ** -(precision_bits // 2)
        for r in roots:
            scale = sum(abs(a) * max(1, abs(r)) ** i for i, a in enumerate(p.coeffs))
            if abs(mp.polyval(coeffs, r)) > eps * scale:
                raise NonConvergenceError(
                    f"root residual above bound for {p!r} at {mp.nstr(r, 10)}"
                )
    return roots


@dataclass(frozen=True)
class LandingReport:
    """Landing value of one ray matched against exact candidate factors."""

    angle: Angle
    n: int
    landing: object
    matched_factor: IntPoly | None
    candidate_index: int | None
    root_index: int | None
    match_distance: float
    margin: float | None
    status: str
    precision_bits: int

    def to_json(self) -> dict:
        return {
            "angle": str(self.angle),
            "n": self.n,
            "landing": _complex_json(self.landing, self.precision_bits),
            "matched_factor": (
                poly_to_json(self.matched_factor)
                if self.matched_factor is not None
                else None
            ),
            "candidate_index": self.candidate_index,
            "root_index": self.root_index,
            "match_distance": repr(self.match_distance),
            "margin": None if self.margin is None else repr(self.margin),
            "status": self.status,
        }


def _candidate_poly(candidate) -> IntPoly:
    if isinstance(candidate, ParamPolynomial):
        if candidate.coordinate != "c":
            raise ValueError(
                f"candidate is in coordinate {candidate.coordinate!r}; "
                "transform to 'c' before matching"
            )
        return candidate.poly
    if isinstance(candidate, IntPoly):
        return candidate
    raise TypeError(f"cannot use {type(candidate).__name__} as a ray candidate")


def land_and_match(
    n: int,
    angle: Angle,
    candidates,
    potential_end: float = 1e-8,
    precision_bits: int = 256,
    tolerance: float = 1e-6,
    margin_min: float = 10.0,
) -> LandingReport:
    """Trace the ray, extrapolate its landing point, and identify which
    irreducible factor of which candidate polynomial it lands on.

    The match is accepted when the nearest candidate root is within
    `tolerance` and the second-nearest is at least `margin_min` times
    farther; otherwise the status degrades to "ambiguous" or
    "no_candidate" and the caller sees the distances either way.
    """
    path = trace_param_ray(
        n, angle, potential_end=potential_end, precision_bits=precision_bits
    )
    landing = _extrapolate_landing(n, angle, path)

    pool = []  # (candidate_index, factor, root_index, root)
    seen_factors = set()
    for idx, candidate in enumerate(candidates):
        for piece, _ in factor(_candidate_poly(candidate)).factors:
            if piece.coeffs in seen_factors:
                continue
            seen_factors.add(piece.coeffs)
            for j, root in enumerate(complex_roots(piece, precision_bits)):
                pool.append((idx, piece, j, root))
    if not pool:
        raise ValueError("no candidate roots to match against")

    with mp.workprec(precision_bits):
        ranked = sorted(pool, key=lambda entry: abs(landing - entry[3]))
        best = ranked[0]
        dist = float(abs(landing - best[3]))
        margin = None
        if len(ranked) > 1:
            margin = float(abs(landing - ranked[1][3])) / max(dist, 1e-300)

    if dist >= tolerance:
        status = "no_candidate"
    elif margin is not None and margin < margin_min:
        status = "ambiguous"
    else:
        status = "matched"
    matched = status != "no_candidate"
    return LandingReport(
        angle=angle,
        n=n,
        landing=landing,
        matched_factor=best[1] if matched else None,
        candidate_index=best[0] if matched else None,
        root_index=best[2] if matched else None,
        match_distance=dist,
        margin=margin,
        status=status,
        precision_bits=precision_bits,
    )
