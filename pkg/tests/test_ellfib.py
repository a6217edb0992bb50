from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from k3verify.ellfib import (
    FibrationError,
    WeierstrassModel,
    c_invariants,
    classify_valuations,
    component_count,
    degeneration_scan,
    euler_number,
    fiber_configuration,
    j_invariant,
    parse_kind,
    trivial_lattice,
)
from k3verify.exactnum import Poly, QuadElem
from k3verify.replay import discriminant_closed_form, family_model, load_jlist

T, LAM = sympy.symbols("t lam")


def to_sympy(p: Poly):
    out = 0
    for k, c in enumerate(p.coeffs):
        if isinstance(c, QuadElem):
            c = sympy.Rational(c.a.numerator, c.a.denominator) + sympy.Rational(c.b.numerator, c.b.denominator) * sympy.sqrt(c.d)
        else:
            c = sympy.Rational(c.numerator, c.denominator)
        out += c * T**k
    return sympy.expand(out)


def oracle_invariants(a1, a2, a3, a4, a6):
    b2 = a1**2 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3**2 + 4 * a6
    b8 = a1**2 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3**2 - a4**2
    c4 = b2**2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -(b2**2) * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6
    return [sympy.expand(x) for x in (c4, c6, disc)]


def rand_poly(rng, deg):
    return Poly([rng.randint(-4, 4) for _ in range(deg + 1)])


@pytest.mark.parametrize("seed", range(8))
def test_c_invariants_match_sympy(seed):
    rng = random.Random(seed)
    W = WeierstrassModel(*(rand_poly(rng, w) for w in (1, 2, 3, 4, 6)))
    ci = c_invariants(W)
    want = oracle_invariants(*(to_sympy(a) for a in W.coeffs))
    assert [to_sympy(x) for x in (ci.c4, ci.c6, ci.disc)] == want


@pytest.mark.parametrize("m", [4, 8, 16])
def test_family_discriminant_against_sympy(m):
    e, k = {4: (10, 2), 8: (6, 4), 16: (6, 8)}[m]
    a2 = T if m == 4 else LAM * T
    a4 = LAM * T**4 if m == 4 else T**2
    a6 = T**7 if m in (4, 8) else T**11
    disc = oracle_invariants(0, a2, 0, a4, a6)[2]
    closed = -16 * T**e * (27 * T ** (2 * k) + (4 * LAM**3 - 18 * LAM) * T**k + 4 - LAM**2)
    assert sympy.expand(disc - closed) == 0
    for lam in (Fraction(-3), Fraction(1, 2), Fraction(7)):
        assert c_invariants(family_model(m, lam)).disc == discriminant_closed_form(m, lam)


# (v(c4), v(c6), v(disc)) -> Kodaira type, standard table for char 0
TATE = [
    ((0, 0, 0), "I0"), ((0, 0, 3), "I3"), ((1, 1, 2), "II"), ((1, 2, 3), "III"),
    ((2, 2, 4), "IV"), ((2, 3, 6), "I0*"), ((2, 3, 9), "I3*"), ((3, 4, 8), "IV*"),
    ((3, 5, 9), "III*"), ((4, 5, 10), "II*"), ((2, 4, 6), "I0*"), ((3, 3, 6), "I0*"),
]


@pytest.mark.parametrize("vals,kind", TATE)
def test_kodaira_table(vals, kind):
    assert classify_valuations(*vals)[0] == kind


def test_non_minimal_valuations_rescaled():
    kind, vals, shifts = classify_valuations(4, 6, 13)
    assert (kind, vals, shifts) == ("I1", (0, 0, 1), 1)


def test_kind_helpers():
    assert euler_number("I5") == 5 and euler_number("I2*") == 8 and euler_number("II*") == 10
    assert component_count("I0*") == 5 and component_count("I1") == 1
    with pytest.raises(ValueError):
        parse_kind("V*")


def test_m8_generic_configuration():
    W = family_model(8, Fraction(5))
    C = fiber_configuration(W)
    assert C.type_counts() == {"I0*": 1, "II*": 1, "I1": 8}
    assert C.total_euler == 24
    assert trivial_lattice(C).expr == "U+D4+E8"


def test_identically_zero_discriminant():
    with pytest.raises(FibrationError):
        fiber_configuration(WeierstrassModel(a2=Poly([0, 1])))


def test_scan_flags_degenerations():
    entries = degeneration_scan(lambda lam: family_model(4, lam), [Fraction(v) for v in (5, 7, 2, -2, 1)])
    assert [e.changed for e in entries] == [False, False, True, True, False]


def test_scan_threads_agree():
    lams = [Fraction(v) for v in range(-3, 5)]
    a = degeneration_scan(lambda lam: family_model(16, lam), lams)
    b = degeneration_scan(lambda lam: family_model(16, lam), lams, threads=4)
    assert [e.config for e in a] == [e.config for e in b]


def test_j_of_cm_models():
    assert j_invariant(WeierstrassModel(a4=Poly([1]))) == 1728
    assert j_invariant(WeierstrassModel(a6=Poly([1]))) == 0


def test_jlist_against_modular_j():
    mpmath.mp.dps = 40
    for j, label in load_jlist():
        tau = {"Z[i]": mpmath.mpc(0, 1), "Z[2i]": mpmath.mpc(0, 2)}[label.split()[0]]
        val = 1728 * mpmath.kleinj(tau)
        assert abs(val - j) < 1e-20, label
