from __future__ import annotations

from fractions import Fraction

import pytest

from k3verify.exactnum import Poly, QuadElem
from k3verify.replay import (
    HURWITZ_SCENARIOS,
    LATTICE_TABLE,
    delsarte_minus2_model,
    degeneration_report,
    family_model,
    feasible_degrees,
    fixed_curve,
    hurwitz_degree_bound,
    hurwitz_feasible,
    j_legendre,
    j_legendre_from_model,
    lambda_from_gamma,
    lambda_squared_from_gamma,
    order_allowed,
    phi_divides,
    rho20_condition,
    rho20_lambdas,
    translate_x,
    verify_lattice_table,
    verify_classification,
)


def test_hurwitz_formula_direct():
    # genus 2 double cover of P^1 with 6 branch points
    assert hurwitz_feasible(2, 2, 6).quotient_genus == 0
    assert not hurwitz_feasible(0, 2, 6).feasible
    assert str(hurwitz_feasible(0, 3, 6)) == "infeasible"
    with pytest.raises(ValueError):
        hurwitz_feasible(1, 1, 2)
    with pytest.raises(ValueError):
        hurwitz_degree_bound(3, 2)


def test_hurwitz_scenarios():
    for s in HURWITZ_SCENARIOS:
        got = tuple(d for d in feasible_degrees(s.genus, s.ram) if d >= s.d_min)
        assert got == s.expected_feasible, s.label
    assert feasible_degrees(2, 6) == [2]
    assert feasible_degrees(6, 4) == [7]


def test_table_rows():
    assert len(LATTICE_TABLE) == 16
    assert verify_lattice_table().ok


def test_order_constraints():
    assert phi_divides(16, 16) and phi_divides(8, 4) and not phi_divides(16, 4)
    assert order_allowed(16, unimodular=False)


def test_fixed_curves():
    assert fixed_curve(10, 10, 0).kind == "empty"
    c = fixed_curve(14, 2, 0)
    assert c.genus == (22 - 14 - 2) // 2


def test_classification_and_degenerations(registry):
    rep = verify_classification(registry)
    assert rep.ok, rep.failures()
    assert degeneration_report(registry).ok


@pytest.mark.parametrize("g", [Fraction(2), Fraction(-1, 3), Fraction(7, 5), Fraction(-4)])
def test_legendre_j(g):
    assert j_legendre(g) == j_legendre_from_model(g)


def test_gamma_lambda():
    assert lambda_from_gamma(Fraction(1), Fraction(1)) == -2
    assert lambda_squared_from_gamma(Fraction(1)) == 4
    with pytest.raises(ValueError):
        lambda_from_gamma(Fraction(2), Fraction(1))
    s = QuadElem.sqrt(3)
    assert lambda_from_gamma(Fraction(3), s) == -(1 + 3) / s


def test_rho20():
    assert rho20_lambdas() == [Fraction(1), Fraction(11, 2)]
    assert rho20_condition(Fraction(1)) and rho20_condition(Fraction(11, 2))
    assert not rho20_condition(Fraction(2))


def test_translation_identity():
    for m in (8, 16):
        moved = translate_x(family_model(m, Fraction(-2)), Poly.t())
        assert moved.coeffs == delsarte_minus2_model(m).coeffs
    assert delsarte_minus2_model(8) == family_model(4, Fraction(0))
