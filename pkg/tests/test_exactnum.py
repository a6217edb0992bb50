from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from k3verify.exactnum import (
    CycInt,
    Fq,
    Poly,
    QuadElem,
    coprime_refinement,
    cyclotomic_poly,
    euler_phi,
    factorize,
    is_prime,
    poly_gcd,
    squarefree_decomposition,
    squarefree_part,
    valuation,
)

T = sympy.Symbol("t")
rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=6)


def to_sympy(p: Poly):
    return sum(sympy.Rational(c.numerator, c.denominator) * T**k for k, c in enumerate(p.coeffs))


def from_sympy(e) -> Poly:
    cs = sympy.Poly(e, T).all_coeffs()[::-1]
    return Poly(Fraction(int(c.p), int(c.q)) for c in cs)


# --- integers ---------------------------------------------------------------

def test_factorize_matches_sympy():
    for n in range(2, 3000):
        assert factorize(n) == sympy.factorint(n)


def test_phi_and_primality():
    for n in range(1, 500):
        assert euler_phi(n) == sympy.totient(n)
        assert is_prime(n) == sympy.isprime(n)


# --- quadratic fields ----------------------------------------------------------

quads = st.builds(lambda a, b: QuadElem(a, b, 3), rats, rats)


@given(quads, quads, quads)
def test_quadratic_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x


@given(quads)
def test_quadratic_inverse_and_norm(x):
    if x:
        assert x * x.inverse() == 1
        assert x.norm() == (x * x.conjugate()).a


def test_sqrt_squares_to_radicand():
    s = QuadElem.sqrt(3)
    assert s * s == 3
    assert (s * s).is_rational()
    with pytest.raises(ValueError):
        QuadElem(1, 1, 4)


def test_mixed_radicands_rejected():
    with pytest.raises(ValueError):
        QuadElem.sqrt(2) + QuadElem.sqrt(3)


# --- polynomials -------------------------------------------------------------

@given(small_polys, small_polys)
@settings(max_examples=60)
def test_gcd_matches_sympy(a, b):
    f, g = Poly(a), Poly(b)
    if f.is_zero() and g.is_zero():
        return
    want = sympy.gcd(to_sympy(f), to_sympy(g))
    got = poly_gcd(f, g)
    assert got == from_sympy(sympy.Poly(want, T).monic().as_expr())


@given(small_polys, small_polys)
@settings(max_examples=60)
def test_divmod_identity(a, b):
    f, g = Poly(a), Poly(b)
    if g.is_zero():
        return
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.is_zero() or r.degree < g.degree


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(1, 3)), min_size=1, max_size=4))
@settings(max_examples=60)
def test_squarefree_decomposition_matches_sympy(roots):
    f = Poly([2])
    for r, e in roots:
        f = f * Poly([-r, 1]) ** e
    c, parts = squarefree_decomposition(f)
    rebuilt = Poly([c])
    for a, i in parts:
        rebuilt = rebuilt * a**i
    assert rebuilt == f
    _, sp = sympy.sqf_list(to_sympy(f))
    assert sorted(i for _, i in parts) == sorted(i for _, i in sp)
    assert squarefree_part(f) == from_sympy(sympy.Poly(sympy.sqf_part(to_sympy(f)), T).monic().as_expr())


def test_coprime_refinement_reconstructs():
    t = Poly.t()
    fs = [t**3 * (t - 1) ** 2, t * (t + 1), (t - 1) * (t**2 + 1)]
    basis, exps = coprime_refinement(fs)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            assert poly_gcd(basis[i], basis[j]).is_constant()
    for f, row in zip(fs, exps):
        prod = Poly([1])
        for b, e in zip(basis, row):
            prod = prod * b**e
        assert (f // prod).is_constant() and (f % prod).is_zero()


def test_valuation_and_reversal():
    t = Poly.t()
    assert valuation(t**5 + t**7, t) == 5
    assert (t**2 + 3).reversed_to(4) == Poly([0, 0, 1, 0, 3])
    with pytest.raises(ValueError):
        (t**3).reversed_to(2)
    with pytest.raises(ValueError):
        coprime_refinement([])


def test_quadratic_coefficients():
    s = QuadElem.sqrt(3)
    t = Poly.t()
    f = (t - s) * (t + s)
    assert f == t**2 - 3
    assert (t - s).radicand() == 3


# --- cyclotomic integers ------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 8, 12, 16, 24, 32, 48])
def test_cyclotomic_poly_matches_sympy(n):
    want = sympy.Poly(sympy.cyclotomic_poly(n, T), T).all_coeffs()[::-1]
    assert list(cyclotomic_poly(n)) == [int(c) for c in want]


@pytest.mark.parametrize("n", [8, 16, 24, 48])
def test_zeta_order_and_sum(n):
    z = CycInt.zeta(n)
    assert z**n == CycInt.from_int(n, 1)
    assert z ** (n // 2) == CycInt.from_int(n, -1)
    total = CycInt.from_exponent_counts(n, [1] * n)
    assert total == CycInt.from_int(n, 0)


@given(st.lists(st.integers(-5, 5), min_size=8, max_size=8),
       st.lists(st.integers(-5, 5), min_size=8, max_size=8))
@settings(max_examples=50)
def test_cycint_ring_and_conjugation(a, b):
    n = 16
    x, y = CycInt(n, a), CycInt(n, b)
    assert x * y == y * x
    assert (x * y).complex_conjugate() == x.complex_conjugate() * y.complex_conjugate()
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-6
    n2 = x * x.complex_conjugate()
    assert abs(n2.to_complex().imag) < 1e-9


# --- finite fields -------------------------------------------------------------

FIELDS = [(5, 1), (13, 1), (17, 1), (3, 2), (5, 2), (2, 3)]


@pytest.mark.parametrize("p,r", FIELDS)
def test_field_tables_are_a_field(p, r):
    F = Fq(p, r)
    q = F.q
    for a in range(q):
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    assert len({F.gen_pow(k) for k in range(q - 1)}) == q - 1


@pytest.mark.parametrize("p,r", FIELDS)
def test_dlog_exhaustive(p, r):
    F = Fq(p, r)
    for x in range(1, F.q):
        assert F.gen_pow(F.dlog(x)) == x


@given(st.integers(0, 24), st.integers(0, 24), st.integers(0, 24))
def test_gf25_distributive(a, b, c):
    F = Fq(5, 2)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))


def test_gf9_matches_sympy_modulus():
    F = Fq(3, 2)
    m = sympy.Poly(list(reversed(F.modulus)), T, modulus=3)
    assert m.is_irreducible


def test_from_rational_reduction():
    F = Fq(17)
    assert F.from_rational(Fraction(1, 2)) == 9
    with pytest.raises(ZeroDivisionError):
        F.from_rational(Fraction(1, 17))


def test_bad_fields():
    with pytest.raises(ValueError):
        Fq(15)
    with pytest.raises(ValueError):
        Fq(7, generator=2)
