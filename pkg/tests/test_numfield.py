"""Tests for number field arithmetic and integrality certificates."""

import random
from fractions import Fraction

import pytest

from unicrit.numfield import (
    FieldElement,
    NumberField,
    ParabolicCollisionError,
    RatPoly,
    congruence_certificates,
    dynamical_unit_check,
    is_algebraic_integer,
    is_unit,
    minimal_polynomial,
    norm_and_trace,
    periodic_orbit_in_field,
    prime_to_n_test,
)
from unicrit.polycore import IntPoly


def rat(*coeffs, var="x"):
    return RatPoly(tuple(Fraction(c) for c in coeffs), var)


def fracs(*values):
    return tuple(Fraction(v) for v in values)


GAUSS = NumberField(rat(1, 0, 1))            # x^2 + 1
QUARTIC = NumberField(rat(1, 1, 0, 0, 1))    # x^4 + x + 1
GOLDEN = NumberField(rat(-1, -1, 1, var="z"))
RATIONALS = NumberField(rat(0, 1))           # Q[x]/(x)


def test_ratpoly_basics():
    p = rat(1, 0, Fraction(1, 2))
    assert p.degree == 2
    assert not p.is_monic
    assert not p.is_integral
    assert p.cleared() == IntPoly((2, 0, 1), "x")
    assert rat(3, 1).to_intpoly() == IntPoly((3, 1), "x")
    with pytest.raises(ValueError):
        p.to_intpoly()
    # trailing zero coefficients are stripped
    assert rat(1, 1, 0).degree == 1


def test_field_validation():
    with pytest.raises(ValueError):
        NumberField(rat(1, 0, 2))        # not monic
    with pytest.raises(ValueError):
        NumberField(rat(-1, 0, 1))       # x^2 - 1 reducible
    with pytest.raises(ValueError):
        NumberField(rat(5))              # degree 0


def test_element_validation():
    with pytest.raises(ValueError):
        FieldElement(GAUSS, fracs(1))    # wrong length
    with pytest.raises(ValueError):
        GAUSS.element((1, 2, 3))         # too many coordinates
    assert GAUSS.element((7,)).coords == fracs(7, 0)
    with pytest.raises(ValueError):
        GAUSS.generator() + GOLDEN.generator()
    with pytest.raises(TypeError):
        GAUSS.from_rational(0.5)


def test_element_arithmetic():
    x = GAUSS.generator()
    assert (x * x).coords == fracs(-1, 0)
    assert (x ** 3).coords == fracs(0, -1)
    assert ((x + 1) * (x - 1)).coords == fracs(-2, 0)
    assert (2 - x).coords == fracs(2, -1)
    assert ((x + 1) / 2).coords == (Fraction(1, 2), Fraction(1, 2))
    assert GAUSS.from_rational(Fraction(3, 4)).as_fraction() == Fraction(3, 4)
    assert x ** 0 == GAUSS.one()
    with pytest.raises(ValueError):
        x ** -1
    with pytest.raises(TypeError):
        x / x
    with pytest.raises(ZeroDivisionError):
        x / 0


def test_minimal_polynomial_examples():
    x = GAUSS.generator()
    assert minimal_polynomial(x).coeffs == fracs(1, 0, 1)
    assert minimal_polynomial(x + 1).coeffs == fracs(2, -2, 1)
    # a rational element has a linear minimal polynomial in any field
    assert minimal_polynomial(GAUSS.from_rational(5)).coeffs == fracs(-5, 1)
    assert minimal_polynomial(RATIONALS.from_rational(5)).coeffs == fracs(-5, 1)


def test_minimal_polynomial_annihilates():
    rng = random.Random(7)
    for _ in range(20):
        e = QUARTIC.element(
            [Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2))) for _ in range(4)]
        )
        mp = minimal_polynomial(e)
        assert 4 % mp.degree == 0
        assert mp.is_monic
        val = QUARTIC.zero()
        for c in reversed(mp.coeffs):
            val = val * e + c
        assert val == QUARTIC.zero()


def test_integrality_examples():
    half = (GAUSS.generator() + 1) / 2
    cert = is_algebraic_integer(half)
    assert not cert.is_integer
    assert not cert.is_unit
    assert cert.min_poly.coeffs == (Fraction(1, 2), Fraction(-1), Fraction(1))

    k7 = NumberField(rat(7, 1, 1))
    cert = is_algebraic_integer(k7.generator())
    assert cert.is_integer
    assert cert.norm == 7
    assert not cert.is_unit

    cert = is_algebraic_integer(RATIONALS.from_rational(3))
    assert cert.is_integer and cert.norm == 3


def test_norm_and_trace_examples():
    k7 = NumberField(rat(7, 1, 1))
    assert norm_and_trace(k7.generator()) == (7, -1)
    for field in (GAUSS, QUARTIC):
        assert norm_and_trace(field.one()) == (1, field.degree)


def test_norm_multiplicative_trace_additive():
    octic = NumberField(rat(1, 1, 0, 1, 1, 0, 0, 0, 1))  # irreducible mod 2
    rng = random.Random(11)
    for field in (GAUSS, QUARTIC, octic):
        d = field.degree
        for _ in range(100):
            e1 = field.element([rng.randint(-3, 3) for _ in range(d)])
            e2 = field.element([rng.randint(-3, 3) for _ in range(d)])
            n1, t1 = norm_and_trace(e1)
            n2, t2 = norm_and_trace(e2)
            np_, _ = norm_and_trace(e1 * e2)
            _, ts = norm_and_trace(e1 + e2)
            assert np_ == n1 * n2
            assert ts == t1 + t2


def test_integers_closed_under_ring_ops():
    rng = random.Random(3)
    for _ in range(15):
        e1 = QUARTIC.element([rng.randint(-3, 3) for _ in range(4)])
        e2 = QUARTIC.element([rng.randint(-3, 3) for _ in range(4)])
        assert is_algebraic_integer(e1).is_integer
        assert is_algebraic_integer(e1 + e2).is_integer
        assert is_algebraic_integer(e1 * e2).is_integer


def test_unit_examples():
    assert is_unit(GOLDEN.generator())
    assert not is_unit(GAUSS.from_rational(2))
    chat = NumberField(rat(1, 0, 1, var="chat"))
    assert is_unit(chat.generator())


def test_orbit_examples():
    orbits = periodic_orbit_in_field(2, -2, 2)
    assert len(orbits) == 1
    ob = orbits[0]
    assert ob.field.modulus.coeffs == fracs(-1, 1, 1)
    z = ob.field.generator()
    assert ob.points == (z, -z - 1)
    assert ob.multiplier == ob.field.from_rational(-4)

    orbits = periodic_orbit_in_field(2, 0, 1)
    data = sorted((ob.points[0].coords[0], ob.multiplier.coords[0]) for ob in orbits)
    assert data == [(0, 0), (1, 2)]

    orbits = periodic_orbit_in_field(2, -1, 1)
    assert orbits[0].field.modulus.coeffs == fracs(-1, -1, 1)
    assert orbits[0].multiplier.coords == fracs(0, 2)


def test_parabolic_collisions_detected():
    with pytest.raises(ParabolicCollisionError):
        periodic_orbit_in_field(2, Fraction(-3, 4), 2)
    with pytest.raises(ParabolicCollisionError):
        periodic_orbit_in_field(2, Fraction(1, 4), 1)


def test_orbits_close_exactly():
    for n in (2, 3):
        for c in (-2, -1, 0, 1):
            for h in (1, 2, 3):
                for ob in periodic_orbit_in_field(n, c, h):
                    pts = ob.points
                    assert len(pts) == h
                    for j in range(h):
                        assert pts[j] ** n + c == pts[(j + 1) % h]
                    expected = ob.field.one() * Fraction(n) ** h
                    for z in pts:
                        expected = expected * z ** (n - 1)
                    assert ob.multiplier == expected


def test_unit_report_examples():
    reports = dynamical_unit_check(2, -2, 2)
    assert len(reports) == 1
    rep = reports[0]
    minus_one = rep.orbit.field.from_rational(-1)
    assert rep.phi_values == (minus_one, minus_one)
    assert rep.product_is_one
    assert all(c.is_unit for c in rep.certificates)

    for rep in dynamical_unit_check(2, 0, 2):
        assert rep.product_is_one
        assert all(c.is_unit for c in rep.certificates)

    with pytest.raises(ValueError):
        dynamical_unit_check(2, -1, 1)


def test_unit_product_identity_sweep():
    # the cyclic product of difference quotients is exactly 1 on every
    # orbit; certificates are skipped to keep the large fields cheap
    ran = 0
    for n in (2, 3):
        for h in (2, 3, 4):
            for c in (-2, -1, 0, 1):
                try:
                    reports = dynamical_unit_check(n, c, h, certify_units=False)
                except ParabolicCollisionError:
                    continue
                assert reports, (n, c, h)
                for rep in reports:
                    assert rep.product_is_one, (n, c, h)
                    assert rep.certificates == ()
                ran += 1
    assert ran == 24


def test_congruence_examples():
    (oc,) = congruence_certificates(2, -2, 2)
    assert oc.scaled_multiplier.element == oc.orbit.field.from_rational(-1)
    assert oc.scaled_multiplier.is_integer and oc.scaled_multiplier.is_unit
    assert oc.power_congruence.element == oc.orbit.field.from_rational(-24)
    assert oc.power_congruence.is_integer
    assert oc.unit_congruence is None

    (oc,) = congruence_certificates(2, -1, 1)
    assert oc.scaled_multiplier.element.coords == fracs(0, 1)
    assert oc.scaled_multiplier.is_unit

    for oc in congruence_certificates(2, 0, 1):
        assert oc.scaled_multiplier.is_integer
        if oc.orbit.multiplier == oc.orbit.field.zero():
            assert oc.scaled_multiplier.element == oc.orbit.field.zero()
            assert oc.unit_congruence is None


def test_congruence_unit_branch_applicable():
    # c = -1/4 gives a fixed point with unit multiplier 2z
    (oc,) = congruence_certificates(2, Fraction(-1, 4), 1)
    assert oc.scaled_multiplier is None          # parameter not integral
    assert is_unit(oc.orbit.multiplier)
    assert oc.unit_congruence is not None
    assert oc.unit_congruence.is_integer
    assert oc.unit_congruence.min_poly.coeffs == fracs(-1, 2, 1)


def test_multiplier_divisibility_small_parameters():
    # mu lands in n^h times the algebraic integers at integer parameters
    for c in (-2, -1):
        for h in (1, 2, 3, 4):
            for oc in congruence_certificates(2, c, h):
                assert oc.scaled_multiplier is not None
                assert oc.scaled_multiplier.is_integer, (c, h)
                assert oc.power_congruence.is_integer, (c, h)


def test_prime_to_n_examples():
    assert prime_to_n_test(IntPoly((7, 1, 1), "b"), 2)
    assert not prime_to_n_test(IntPoly((-2, 1), "y"), 2)
    assert not prime_to_n_test(IntPoly((0, 1), "y"), 2)   # the zero element
    assert prime_to_n_test(rat(7, 1, 1), 3)
    with pytest.raises(ValueError):
        prime_to_n_test(IntPoly((1, 2), "y"), 2)           # not monic
    with pytest.raises(ValueError):
        prime_to_n_test(IntPoly((5,), "y"), 2)             # degree 0


def test_prime_to_n_orbit_consistency():
    # for one orbit the scaled point 2z, the multiplier, and the conjugate
    # parameters are all coprime to n together or not at all
    def verdicts(c):
        out = []
        for ob in periodic_orbit_in_field(2, c, 2 if c == -2 else 1):
            w = ob.points[0] * 2
            for value in (w, ob.multiplier):
                out.append(prime_to_n_test(minimal_polynomial(value), 2))
            b = 4 * Fraction(c)
            out.append(prime_to_n_test(IntPoly((int(-b), 1), "b"), 2))
        return out

    assert verdicts(-2) == [False, False, False]
    assert verdicts(Fraction(-1, 4)) == [True, True, True]


def test_certificate_json_shape():
    cert = is_algebraic_integer(GOLDEN.generator())
    obj = cert.to_json(context={"role": "demo"})
    assert sorted(obj) == ["context", "element_minpoly", "is_integer", "is_unit", "norm"]
    assert obj["is_integer"] is True
    assert obj["is_unit"] is True
    assert obj["norm"] == "-1"
    assert obj["element_minpoly"] == {"var": "y", "coeffs": ["-1", "-1", "1"]}
    assert obj["context"] == {"role": "demo"}
    assert RatPoly.from_json(obj["element_minpoly"]) == cert.min_poly


def test_float_inputs_rejected():
    with pytest.raises(TypeError):
        periodic_orbit_in_field(2, 0.5, 1)
    with pytest.raises(TypeError):
        RatPoly((0.5,))
