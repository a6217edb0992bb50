from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from k3verify.lattices import (
    LatticeError,
    canonical_expr,
    discriminant_form,
    form_isomorphic,
    genus_equal,
    isotropic_glues,
    lattice_make,
    mirror_check,
    nikulin_triple,
    overlattice,
    parse_expr,
)

EXPRS = ["A1", "A2", "A3", "D4", "D5", "D6", "E6", "E7", "E8", "U", "U(2)", "<2>^2",
         "U+D4+E8", "U+A1^4", "U(2)+A1^4", "U+D8^2", "U^2+D4+E8", "U+A2"]


def oracle_factors(gram):
    m = sympy.Matrix(gram)
    if m.det() == 0:
        return None
    d = sympy_snf(m, domain=sympy.ZZ)
    return sorted(abs(int(d[i, i])) for i in range(m.rows) if abs(int(d[i, i])) != 1)


@pytest.mark.parametrize("expr", EXPRS)
def test_det_and_discriminant_group_match_sympy(expr):
    L = lattice_make(expr)
    assert L.det == sympy.Matrix(L.gram).det()
    F = discriminant_form(L)
    assert sorted(F.invariant_factors) == oracle_factors(L.gram)
    assert F.order == abs(L.det)


@pytest.mark.parametrize("expr", EXPRS)
def test_signature_matches_eigenvalues(expr):
    L = lattice_make(expr)
    ev = np.linalg.eigvalsh(np.array(L.gram, dtype=float))
    assert L.signature == (int((ev > 0).sum()), int((ev < 0).sum()))


def test_root_lattices_are_negative_definite():
    for expr in ("A1", "D4", "E7", "E8"):
        L = lattice_make(expr)
        assert L.signature == (0, L.rank)
        assert L.is_even()


def test_a1_discriminant_form():
    F = discriminant_form(lattice_make("A1"))
    assert F.invariant_factors == (2,)
    assert sorted(F.q_values.values()) == [Fraction(0), Fraction(3, 2)]


def test_e8_unimodular_and_u2():
    assert discriminant_form(lattice_make("E8")).order == 1
    F = discriminant_form(lattice_make("U(2)"))
    assert F.invariant_factors == (2, 2)
    assert all(v.denominator == 1 for v in F.q_values.values())


def test_canonical_expr_orders_terms():
    assert canonical_expr("E8+D4+U") == "U+D4+E8"
    assert canonical_expr("A1+A1+U+A1+A1") == "U+A1^4"


@pytest.mark.parametrize("bad", ["", "U+", "F4", "A0", "U(0)", "A1^0", "D3x"])
def test_malformed_expressions(bad):
    with pytest.raises(LatticeError):
        parse_expr(bad)


def test_nikulin_triples():
    assert nikulin_triple(lattice_make("U+D4+E8")).triple() == (14, 2, 0)
    assert nikulin_triple(lattice_make("U+A1^4")).triple() == (6, 4, 1)
    with pytest.raises(LatticeError):
        nikulin_triple(lattice_make("<1>"))


def test_form_isomorphism_and_anti_isometry():
    ns = discriminant_form(lattice_make("U+D4"))
    t = discriminant_form(lattice_make("U^2+D4+E8"))
    assert form_isomorphic(ns, t, negate=True)
    assert not form_isomorphic(discriminant_form(lattice_make("A1")),
                               discriminant_form(lattice_make("<2>")))
    assert form_isomorphic(discriminant_form(lattice_make("A1")),
                           discriminant_form(lattice_make("<2>")), negate=True)


def test_genus_distinguishes_delta():
    assert genus_equal(lattice_make("U+D4+E8"), lattice_make("U+D4+E8"))
    assert not genus_equal(lattice_make("U+D4+D8"), lattice_make("U+A1^4+E8"))
    # same triple, different presentation
    assert genus_equal(lattice_make("U+D8+E8"), lattice_make("U+E8+D8"))


def test_mirror_pairs():
    assert mirror_check("U^2+D4+E8", "U+D4+E8")
    assert mirror_check("U+U(2)", "U(2)")
    assert not mirror_check("U^2", "U(2)")


def test_overlattice_glues():
    L = lattice_make("U+A1^2+E7^2")
    glues = isotropic_glues(L)
    assert len(glues) == 5
    triples = sorted(nikulin_triple(overlattice(L, g)).triple() for g in glues)
    assert triples.count((18, 2, 0)) == 1
    M = overlattice(L, [g for g in glues if nikulin_triple(overlattice(L, g)).triple() == (18, 2, 0)][0])
    assert M.det * 4 == L.det
    assert M.is_even()
