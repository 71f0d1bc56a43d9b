"""Verification sweeps over the polynomial families, with full witnesses.

Each operation checks one arithmetic claim about the families built in
dynmaps at a single parameter cell and returns a VerificationReport: the
claim id, the cell, a witness list carrying every factor, norm, bound,
and quotient involved, and an overall verdict.  A report says "pass"
only when every exact check in it succeeded; anything partial or
inapplicable is labeled as such rather than swallowed.

Reports serialize deterministically: identical inputs give byte-identical
JSON (timing is zeroed unless explicitly requested).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction

from .dynmaps import (
    DegreeCapError,
    SpecialCaseError,
    gleason_poly,
    iterate_poly_gb,
    misiurewicz_poly,
    parabolic_param_poly,
    periodicity_poly,
)
from .dynmaps import _strip_factors
from .factorz import factor
from .numfield import (
    ParabolicCollisionError,
    congruence_certificates,
    dynamical_unit_check,
)
from .polycore import IntPoly, moebius, poly_to_json

__all__ = [
    "SweepCaps",
    "VerificationReport",
    "galois_experiment",
    "report_json",
    "sweep_thm_1_4",
    "sweep_thm_3_1",
    "sweep_verdict",
    "verify_congruences",
    "verify_dynamical_units",
    "verify_monic_structure",
    "verify_thm_1_4",
    "verify_thm_3_1",
]

CLAIMS = (
    "thm14",
    "thm31",
    "lemma31",
    "eq4",
    "remark22",
    "remark23",
    "monic11",
    "galois33",
)

SCOPE_NOTE_MONIC = (
    "monic structure plus per-element integrality certificates stand in "
    "for the integral-closure statement; no closure computation is done"
)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one verification cell, with complete witnesses."""

    claim: str
    cell: dict
    witnesses: tuple
    verdict: str
    elapsed_ms: int

    def to_json(self, timings: bool = False) -> dict:
        return {
            "claim": self.claim,
            "cell": self.cell,
            "witnesses": list(self.witnesses),
            "verdict": self.verdict,
            "elapsed_ms": self.elapsed_ms if timings else 0,
        }


def report_json(report: VerificationReport, timings: bool = False) -> str:
    """Canonical serialized form; deterministic for identical inputs."""
    return json.dumps(report.to_json(timings=timings), sort_keys=True)


def _finish(claim, cell, witnesses, verdict, t0) -> VerificationReport:
    elapsed = int((time.perf_counter() - t0) * 1000)
    return VerificationReport(claim, cell, tuple(witnesses), verdict, elapsed)


def _signed_norm(p: IntPoly) -> int:
    """Norm of a root of a monic irreducible factor: (-1)^deg * p(0)."""
    return -p.constant if p.degree % 2 else p.constant


def _divisibility_witness(piece: IntPoly, coordinate: str, bound: int):
    """Witness dict for |Norm(root of piece)| dividing bound; (witness, ok)."""
    w = {
        "coordinate": coordinate,
        "factor": poly_to_json(piece),
        "degree": piece.degree,
    }
    if not piece.is_monic:
        w["verdict"] = "fail"
        w["note"] = "factor is not monic; its root is not an algebraic integer"
        return w, False
    norm = _signed_norm(piece)
    w["norm"] = str(norm)
    w["bound"] = str(bound)
    if norm != 0 and bound % abs(norm) == 0:
        w["quotient"] = str(bound // abs(norm))
        w["verdict"] = "pass"
        return w, True
    w["verdict"] = "fail"
    return w, False


def verify_thm_1_4(n: int, h: int, m: int) -> VerificationReport:
    """Norm divisibility for parabolic parameters with orbit period h and
    multiplier a primitive m-th root of unity.

    For every irreducible degree-d factor of the b-coordinate polynomial,
    |Norm(b)| must divide (n^r - 1)^d with r = h*m; for the bhat
    coordinate the exponent is (n-1)*dhat.
    """
    t0 = time.perf_counter()
    cell = {"n": n, "h": h, "m": m}
    r = h * m
    base = n ** r - 1
    witnesses = []
    verdict = "pass"
    try:
        for coordinate, scale in (("b", 1), ("bhat", n - 1)):
            param = parabolic_param_poly(n, h, m, coordinate)
            for piece, _ in factor(param.poly).factors:
                bound = base ** (scale * piece.degree)
                w, ok = _divisibility_witness(piece, coordinate, bound)
                witnesses.append(w)
                if not ok:
                    verdict = "fail"
    except DegreeCapError as exc:
        witnesses.append({"skipped": True, "reason": str(exc)})
        verdict = "incomplete"
    return _finish("thm14", cell, witnesses, verdict, t0)


def verify_thm_3_1(
    n: int, t: int, h: int, tau: int | None = None
) -> VerificationReport:
    """Norm constraints on critical-orbit parameter polynomials.

    t >= 1: every irreducible factor of the preperiodic-parameter
    polynomial (transient t, period h, ramification tau) has |Norm(chat)|
    dividing n.  t = 0 selects the critically periodic branch instead,
    where every factor must have |Norm(chat)| = 1.
    """
    t0 = time.perf_counter()
    cell = {"n": n, "t": t, "h": h, "tau": tau}
    witnesses = []
    verdict = "pass"
    try:
        if t == 0:
            if tau is not None:
                raise ValueError("tau does not apply to the periodic branch")
            try:
                param = gleason_poly(n, h, "chat")
            except SpecialCaseError as exc:
                witnesses.append({"note": str(exc)})
                return _finish("thm31", cell, witnesses, "not_applicable", t0)
            for piece, _ in factor(param.poly).factors:
                norm = _signed_norm(piece) if piece.is_monic else None
                w = {
                    "coordinate": "chat",
                    "factor": poly_to_json(piece),
                    "degree": piece.degree,
                    "norm": str(norm),
                    "verdict": "pass" if norm in (1, -1) else "fail",
                }
                if w["verdict"] == "fail":
                    verdict = "fail"
                witnesses.append(w)
        else:
            if tau is None:
                raise ValueError("the preperiodic branch requires tau")
            param = misiurewicz_poly(n, t, h, tau, "chat")
            for piece, _ in factor(param.poly).factors:
                if not piece.is_monic:
                    witnesses.append(
                        {
                            "coordinate": "chat",
                            "factor": poly_to_json(piece),
                            "degree": piece.degree,
                            "verdict": "fail",
                            "note": "factor is not monic",
                        }
                    )
                    verdict = "fail"
                    continue
                norm = _signed_norm(piece)
                ok = norm != 0 and n % abs(norm) == 0
                witnesses.append(
                    {
                        "coordinate": "chat",
                        "factor": poly_to_json(piece),
                        "degree": piece.degree,
                        "norm": str(norm),
                        "divides_n": ok,
                        "verdict": "pass" if ok else "fail",
                    }
                )
                if not ok:
                    verdict = "fail"
    except DegreeCapError as exc:
        witnesses.append({"skipped": True, "reason": str(exc)})
        verdict = "incomplete"
    return _finish("thm31", cell, witnesses, verdict, t0)


def verify_monic_structure(n: int, h: int) -> VerificationReport:
    """Monicity and degrees of the cleared iterate and its periodicity form.

    P_h must be monic of degree n^h in w and monic of degree n^(h-1) in b,
    and the same must hold for P_h - N_h*w.
    """
    t0 = time.perf_counter()
    cell = {"n": n, "h": h}
    witnesses = [{"note": SCOPE_NOTE_MONIC}]
    verdict = "pass"
    try:
        pair = iterate_poly_gb(n, h)
        period = periodicity_poly(n, h)
        for name, poly in (("iterate", pair.poly), ("periodicity", period)):
            lead_w = poly.as_univariate_in("w")[-1]
            lead_b = poly.as_univariate_in("b")[-1]
            w = {
                "polynomial": name,
                "degree_w": poly.degree("w"),
                "degree_b": poly.degree("b"),
                "lead_coeff_w": poly_to_json(lead_w),
                "lead_coeff_b": poly_to_json(lead_b),
            }
            ok = (
                poly.degree("w") == n ** h
                and poly.degree("b") == n ** (h - 1)
                and lead_w == IntPoly.const(1, "b")
                and lead_b == IntPoly.const(1, "w")
            )
            w["verdict"] = "pass" if ok else "fail"
            if not ok:
                verdict = "fail"
            witnesses.append(w)
    except DegreeCapError as exc:
        witnesses.append({"skipped": True, "reason": str(exc)})
        verdict = "incomplete"
    return _finish("monic11", cell, witnesses, verdict, t0)


def verify_congruences(n: int, parameter, h: int) -> VerificationReport:
    """Multiplier congruences at a rational parameter, aggregated per orbit.

    Bundles three certified divisibilities: mu/n^h (witness claim
    "lemma31", needs an integral parameter), (mu^n - (-b)^((n-1)h))/n
    (claim "remark22", always computed), and (n^h - mu)/b via its
    (n-1)-st power (claim "eq4", needs mu to be a unit).  Verdict is
    "pass" iff every applicable certificate is an algebraic integer.
    """
    t0 = time.perf_counter()
    parameter = Fraction(parameter)
    cell = {"n": n, "parameter": str(parameter), "h": h}
    witnesses = []
    verdict = "pass"
    try:
        bundles = congruence_certificates(n, parameter, h)
    except ParabolicCollisionError as exc:
        witnesses.append({"note": str(exc)})
        return _finish("remark22", cell, witnesses, "parabolic_collision", t0)
    for bundle in bundles:
        modulus = bundle.orbit.field.modulus.to_json()
        for claim, cert in (
            ("lemma31", bundle.scaled_multiplier),
            ("remark22", bundle.power_congruence),
            ("eq4", bundle.unit_congruence),
        ):
            w = {"claim": claim, "orbit_modulus": modulus}
            if cert is None:
                w["applicable"] = False
            else:
                w["applicable"] = True
                w["certificate"] = cert.to_json(context={"claim": claim})
                w["verdict"] = "pass" if cert.is_integer else "fail"
                if not cert.is_integer:
                    verdict = "fail"
            witnesses.append(w)
    return _finish("remark22", cell, witnesses, verdict, t0)


def verify_dynamical_units(n: int, c, h: int) -> VerificationReport:
    """Exact cyclic product of difference quotients, plus unit certificates."""
    t0 = time.perf_counter()
    c = Fraction(c)
    cell = {"n": n, "parameter": str(c), "h": h}
    witnesses = []
    verdict = "pass"
    try:
        reports = dynamical_unit_check(n, c, h)
    except ParabolicCollisionError as exc:
        witnesses.append({"note": str(exc)})
        return _finish("remark23", cell, witnesses, "parabolic_collision", t0)
    for rep in reports:
        w = {
            "orbit_modulus": rep.orbit.field.modulus.to_json(),
            "product_is_one": rep.product_is_one,
        }
        ok = rep.product_is_one
        if rep.certificates:
            w["phi_units"] = [cert.is_unit for cert in rep.certificates]
            ok = ok and all(cert.is_unit for cert in rep.certificates)
        if not ok:
            verdict = "fail"
        w["verdict"] = "pass" if ok else "fail"
        witnesses.append(w)
    return _finish("remark23", cell, witnesses, verdict, t0)


def _stratified_parabolic(n: int, h: int, m: int) -> IntPoly:
    """Parabolic chat polynomial restricted to the (h, m) stratum.

    Only the m = 1 cell mixes strata: its dynatomic picks up every lower
    orbit (h', m') with h' m' = h, because the collapsed period-h cycle
    through such an orbit has formal multiplier exactly 1.  Cells with
    m >= 2 are already pure, so stripping them out of the m = 1 cell
    leaves the genuine multiplier-1 stratum.
    """
    poly = parabolic_param_poly(n, h, m, "chat").poly
    if m > 1 or h == 1:
        return poly
    for h2 in range(1, h):
        if h % h2:
            continue
        lower = parabolic_param_poly(n, h2, h // h2, "chat").poly
        poly = _strip_factors(poly, lower)
    return poly


def galois_experiment(
    n: int,
    kind: str,
    *,
    h: int,
    t: int | None = None,
    tau: int | None = None,
    m: int | None = None,
) -> VerificationReport:
    """Count irreducible factors of one stratified parameter polynomial.

    A single irreducible factor is consistent with the conjecture that the
    stratum forms one Galois orbit; more factors are reported as evidence,
    never as a refutation verdict.
    """
    t0 = time.perf_counter()
    cell = {"n": n, "kind": kind, "h": h, "t": t, "tau": tau, "m": m}
    try:
        if kind == "gleason":
            poly = gleason_poly(n, h, "chat").poly
        elif kind == "misiurewicz":
            if t is None or tau is None:
                raise ValueError("misiurewicz kind requires t and tau")
            poly = misiurewicz_poly(n, t, h, tau, "chat").poly
        elif kind == "parabolic":
            if m is None:
                raise ValueError("parabolic kind requires m")
            poly = _stratified_parabolic(n, h, m)
        else:
            raise ValueError(f"unknown experiment kind {kind!r}")
    except SpecialCaseError as exc:
        return _finish("galois33", cell, [{"note": str(exc)}], "not_applicable", t0)
    except DegreeCapError as exc:
        return _finish(
            "galois33", cell, [{"skipped": True, "reason": str(exc)}], "incomplete", t0
        )
    pieces = factor(poly).factors
    reading = (
        "consistent with single-orbit conjecture"
        if len(pieces) == 1
        else "inconsistent with single-orbit conjecture"
    )
    witnesses = [
        {
            "factor_count": len(pieces),
            "degrees": [p.degree for p, _ in pieces],
            "factors": [poly_to_json(p) for p, _ in pieces],
            "reading": reading,
        }
    ]
    return _finish("galois33", cell, witnesses, "pass", t0)


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepCaps:
    """Resource limits for sweep runners; skipped cells report incomplete."""

    max_dynatomic_degree: int = 80


def _dynatomic_degree(n: int, h: int) -> int:
    return sum(moebius(h // d) * n ** d for d in range(1, h + 1) if h % d == 0)


def sweep_thm_1_4(
    ns: tuple[int, ...] = (2, 3, 4),
    r_max: int = 6,
    caps: SweepCaps = SweepCaps(),
) -> list[VerificationReport]:
    """All norm-divisibility cells with ray period r = h*m <= r_max."""
    reports = []
    for n in ns:
        for r in range(1, r_max + 1):
            for h in range(1, r + 1):
                if r % h:
                    continue
                m = r // h
                if _dynatomic_degree(n, h) > caps.max_dynatomic_degree:
                    reports.append(
                        VerificationReport(
                            claim="thm14",
                            cell={"n": n, "h": h, "m": m},
                            witnesses=(
                                {
                                    "skipped": True,
                                    "reason": "dynatomic degree "
                                    f"{_dynatomic_degree(n, h)} exceeds cap "
                                    f"{caps.max_dynatomic_degree}",
                                },
                            ),
                            verdict="incomplete",
                            elapsed_ms=0,
                        )
                    )
                    continue
                reports.append(verify_thm_1_4(n, h, m))
    return reports


def sweep_thm_3_1(
    ns: tuple[int, ...] = (2, 3, 4),
    sum_max: int = 6,
    gleason_h_max: int = 5,
) -> list[VerificationReport]:
    """All preperiodic cells with t + h <= sum_max plus the periodic branch."""
    reports = []
    for n in ns:
        for h in range(2, gleason_h_max + 1):
            reports.append(verify_thm_3_1(n, 0, h))
        taus = [tau for tau in range(2, n + 1) if n % tau == 0]
        for t in range(1, sum_max):
            for h in range(1, sum_max - t + 1):
                for tau in taus:
                    reports.append(verify_thm_3_1(n, t, h, tau))
    return reports


def sweep_verdict(reports: list[VerificationReport]) -> str:
    """Aggregate: fail if any cell failed, else pass (incompletes allowed)."""
    return "fail" if any(r.verdict == "fail" for r in reports) else "pass"
