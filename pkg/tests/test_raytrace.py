"""External-ray tracing, landing extrapolation, and candidate matching."""

import mpmath as mp
import pytest

from unicrit.dynmaps import misiurewicz_poly, parabolic_param_poly
from unicrit.polycore import IntPoly
from unicrit.raytrace import (
    Angle,
    RayPath,
    _candidate_poly,
    angle_orbit,
    complex_roots,
    land_and_match,
    trace_param_ray,
)


# ---------------------------------------------------------------- angles

def test_angle_basic():
    a = Angle(3, 7)
    assert (a.p, a.q) == (3, 7)
    assert str(a) == "3/7"
    assert a.value == mp.mpf(3) / 7 or float(a.value) == 3 / 7


def test_angle_validation():
    with pytest.raises(ValueError):
        Angle(2, 4)  # not reduced
    with pytest.raises(ValueError):
        Angle(3, 2)  # >= 1
    with pytest.raises(ValueError):
        Angle(-1, 3)
    with pytest.raises(TypeError):
        Angle(1.0, 3)


def test_angle_parse():
    assert Angle.parse("3/7") == Angle(3, 7)
    assert Angle.parse(" 1/2 ") == Angle(1, 2)
    assert Angle.parse("2/4") == Angle(1, 2)  # Fraction reduces first
    assert Angle.parse("0") == Angle(0, 1)
    with pytest.raises(ValueError):
        Angle.parse("7/4")
    with pytest.raises(ValueError):
        Angle.parse("-1/3")


@pytest.mark.parametrize(
    "p,q,n,expected",
    [
        (1, 7, 2, (0, 3)),
        (1, 5, 2, (0, 4)),
        (9, 56, 2, (3, 3)),
        (1, 2, 2, (1, 1)),
        (1, 4, 2, (2, 1)),
        (1, 6, 2, (1, 2)),
        (0, 1, 2, (0, 1)),
        (1, 3, 3, (1, 1)),
        (1, 4, 3, (0, 2)),
    ],
)
def test_angle_orbit(p, q, n, expected):
    assert angle_orbit(Angle(p, q), n) == expected


def test_angle_orbit_periodic_denominator_divides():
    # strictly periodic angle under x n  <=>  gcd(q, n) = 1,
    # and then q | n^r - 1 for the orbit period r
    for n, qs in [(2, (3, 5, 7, 9, 11, 13, 15, 21)), (3, (2, 4, 5, 7, 8))]:
        for q in qs:
            pre, r = angle_orbit(Angle(1, q), n)
            assert pre == 0
            assert (n**r - 1) % q == 0


def test_angle_orbit_rejects_small_n():
    with pytest.raises(ValueError):
        angle_orbit(Angle(1, 3), 1)


# ---------------------------------------------------------------- tracing

@pytest.fixture(scope="module")
def zero_ray():
    return trace_param_ray(2, Angle(0, 1), potential_end=1e-4)


def test_trace_zero_ray_real_and_monotone(zero_ray):
    # the 0-ray is the real slice c > 1/4: every sample exactly real,
    # strictly decreasing toward the cusp
    assert zero_ray.points[0][0] == 32
    assert zero_ray.points[-1][0] == mp.mpf(1e-4)
    for _, c in zero_ray.points:
        assert abs(mp.mpc(c).imag) < 1e-70
    reals = [mp.mpc(c).real for _, c in zero_ray.points]
    assert all(b < a for a, b in zip(reals, reals[1:]))
    assert 0.25 < reals[-1] < 0.35


def test_trace_potentials_strictly_decrease(zero_ray):
    pots = [t for t, _ in zero_ray.points]
    assert all(b < a for a, b in zip(pots, pots[1:]))


def test_trace_records_precision(zero_ray):
    assert zero_ray.precision_bits == 256
    assert zero_ray.n == 2
    assert zero_ray.angle == Angle(0, 1)


def test_trace_one_third_approaches_satellite_root():
    # landing point is c = -3/4; the parabolic approach is logarithmically
    # slow, so at t = 1e-6 we only check the trace is near the right
    # landing point rather than a neighboring ray's
    path = trace_param_ray(2, Angle(1, 3), potential_end=1e-6)
    assert abs(mp.mpc(path.endpoint) + 0.75) < 0.2


def test_trace_argument_validation():
    with pytest.raises(ValueError):
        trace_param_ray(1, Angle(1, 3))
    with pytest.raises(ValueError):
        trace_param_ray(2, Angle(1, 3), potential_start=1e-8, potential_end=32.0)


def test_ray_path_rejects_nondecreasing_potentials():
    pts = ((mp.mpf(1), mp.mpc(3)), (mp.mpf(2), mp.mpc(3)))
    with pytest.raises(ValueError):
        RayPath(Angle(0, 1), 2, pts, 256)


def test_ray_path_json(zero_ray):
    doc = zero_ray.to_json()
    assert doc["angle"] == "0/1"
    assert doc["n"] == 2
    assert doc["precision_bits"] == 256
    assert len(doc["points"]) == len(zero_ray.points)
    first = doc["points"][0]
    assert set(first) == {"potential", "c"}
    assert set(first["c"]) == {"re", "im", "bits"}
    assert isinstance(first["potential"], str)
    assert float(first["c"]["im"]) == 0.0


# ---------------------------------------------------------------- roots

def test_complex_roots_ordering():
    roots = complex_roots(IntPoly((1, 0, 1), "x"))
    assert len(roots) == 2
    assert abs(roots[0] + 1j) < 1e-70
    assert abs(roots[1] - 1j) < 1e-70


def test_complex_roots_quadratic():
    roots = complex_roots(IntPoly((7, 1, 1), "b"))
    with mp.workprec(320):  # compare at full precision, not the ambient 53 bits
        half_sqrt27 = mp.sqrt(27) / 2
        assert abs(roots[0] - mp.mpc(-0.5, -half_sqrt27)) < 1e-70
        assert abs(roots[1] - mp.mpc(-0.5, half_sqrt27)) < 1e-70


def test_complex_roots_linear_and_constant():
    (root,) = complex_roots(IntPoly((2, 1), "c"))
    assert abs(root + 2) < 1e-70
    assert complex_roots(IntPoly((5,), "c")) == []


def test_complex_roots_symmetric_functions():
    p = IntPoly((135, 108, 144, 64), "c")
    roots = complex_roots(p)
    assert len(roots) == 3
    with mp.workprec(320):
        total = mp.fsum(r.real for r in roots) + 1j * mp.fsum(r.imag for r in roots)
        assert abs(total + mp.mpf(144) / 64) < 1e-70
        prod = roots[0] * roots[1] * roots[2]
        assert abs(prod + mp.mpf(135) / 64) < 1e-70


# ---------------------------------------------------------------- landing

@pytest.fixture(scope="module")
def half_ray_match():
    return land_and_match(2, Angle(1, 2), [misiurewicz_poly(2, 1, 1, 2, "c")])


def test_landing_half_ray(half_ray_match):
    rep = half_ray_match
    assert rep.status == "matched"
    assert rep.matched_factor.coeffs == (2, 1)
    assert rep.margin is None  # single candidate root
    assert rep.match_distance < 1e-9
    assert abs(mp.mpc(rep.landing) + 2) < 1e-9


def test_landing_one_sixth_ray():
    rep = land_and_match(2, Angle(1, 6), [misiurewicz_poly(2, 1, 2, 2, "c")])
    assert rep.status == "matched"
    assert rep.matched_factor.coeffs == (1, 0, 1)
    assert rep.root_index == 1  # roots sorted by (re, im): -i, then +i
    assert abs(mp.mpc(rep.landing) - 1j) < 1e-8
    assert rep.margin > 10


def test_landing_one_seventh_picks_quadratic_factor():
    cands = [parabolic_param_poly(2, 1, 3, "c"), parabolic_param_poly(2, 3, 1, "c")]
    rep = land_and_match(2, Angle(1, 7), cands)
    assert rep.status == "matched"
    assert rep.candidate_index == 0
    assert rep.matched_factor.coeffs == (7, 4, 16)
    assert mp.mpc(rep.landing).imag > 0
    assert rep.match_distance < 1e-6
    assert rep.margin > 10


def test_landing_conjugate_angles_land_conjugate():
    # complex conjugation sends the p/q ray to the (q-p)/q ray
    cands = [parabolic_param_poly(2, 1, 3, "c")]
    rep_a = land_and_match(2, Angle(1, 7), cands)
    rep_b = land_and_match(2, Angle(6, 7), cands)
    za, zb = mp.mpc(rep_a.landing), mp.mpc(rep_b.landing)
    assert abs(za - mp.conj(zb)) < 1e-9
    assert {rep_a.root_index, rep_b.root_index} == {0, 1}


def test_landing_no_candidate(half_ray_match):
    rep = land_and_match(2, Angle(1, 2), [IntPoly((1, 0, 1), "c")])
    assert rep.status == "no_candidate"
    assert rep.matched_factor is None
    assert rep.candidate_index is None
    assert rep.root_index is None
    assert rep.match_distance > 1  # landing is -2, roots are +-i
    # distances are still reported so the caller can see how far off it was
    assert abs(rep.match_distance - abs(mp.mpc(half_ray_match.landing) - 1j)) < 1e-6


def test_landing_ambiguous_when_roots_collide():
    # second candidate plants a decoy root 3e-12 away from -2, well inside
    # the extrapolation error times margin_min, so no match wins by 10x
    decoy = IntPoly((2000000000003, 1000000000000), "c")
    rep = land_and_match(2, Angle(1, 2), [IntPoly((2, 1), "c"), decoy])
    assert rep.status == "ambiguous"
    assert rep.margin is not None and rep.margin < 10
    assert rep.matched_factor is not None
    assert rep.match_distance < 1e-10


def test_landing_empty_candidate_pool():
    with pytest.raises(ValueError, match="no candidate roots"):
        land_and_match(2, Angle(1, 2), [IntPoly((5,), "c")])


def test_candidate_coordinate_guard():
    with pytest.raises(ValueError, match="transform"):
        _candidate_poly(parabolic_param_poly(2, 1, 2, "b"))
    with pytest.raises(TypeError):
        _candidate_poly(3.14)
    raw = IntPoly((2, 1), "c")
    assert _candidate_poly(raw) is raw
    assert _candidate_poly(parabolic_param_poly(2, 1, 2, "c")).degree >= 1


def test_landing_report_json(half_ray_match):
    doc = half_ray_match.to_json()
    assert set(doc) == {
        "angle", "n", "landing", "matched_factor", "candidate_index",
        "root_index", "match_distance", "margin", "status",
    }
    assert doc["angle"] == "1/2"
    assert doc["status"] == "matched"
    assert doc["margin"] is None
    assert doc["matched_factor"] == {"coeffs": ["2", "1"], "var": "c"}
    assert float(doc["match_distance"]) < 1e-9
    assert set(doc["landing"]) == {"re", "im", "bits"}
    assert abs(float(doc["landing"]["re"]) + 2) < 1e-9
