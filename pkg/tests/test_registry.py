from __future__ import annotations

from fractions import Fraction

import pytest

from k3verify.exactnum import Poly, QuadElem
from k3verify.registry import (
    RegistryError,
    format_lambda,
    parse_fibers,
    parse_lambda,
    parse_poly,
    parse_registry,
    parse_registry_text,
    serialize_registry,
)
from k3verify.replay import check_record
from k3verify.lattices import lattice_make

M16 = """# sample record
[surface m16]
m = 16
field = Q
lambda = 1
a2 = 1*t
a4 = t^2
a6 = t^11
fibers = I0*:0, II:inf, I1:gen x16
ns = U + D4
t_lat = U^2 + D4 + E8
"""


def test_spec_example_record():
    reg = parse_registry_text(M16)
    rec = reg.get("m16")
    assert rec.m == 16 and rec.lam == 1
    assert lattice_make(rec.ns).rank == 6
    assert lattice_make(rec.t_lat).rank == 16
    assert parse_registry_text(serialize_registry(reg)) == reg
    assert check_record(rec).ok


def test_empty_file():
    assert len(parse_registry_text("")) == 0
    assert len(parse_registry_text("# only a comment\n\n")) == 0


def test_shipped_registry_round_trips(registry):
    again = parse_registry_text(serialize_registry(registry))
    assert again == registry
    assert serialize_registry(again) == serialize_registry(registry)


def test_shipped_registry_contents(registry):
    names = set(registry.names())
    assert {"m2", "m4u", "m4", "m8", "m16", "Y", "Z"} <= names
    for m in (4, 8, 16):
        assert {f"m{m}_X0", f"m{m}_X2", f"m{m}_Xsqrt3"} <= names
    assert {"m8_D2", "m16_D2", "m8_D3", "m16_D3"} <= names
    assert all(rec.comments for rec in registry)


def test_every_shipped_record_matches_its_fibres(registry):
    from k3verify.ellfib import fiber_configuration
    from k3verify.registry import match_fibers

    for rec in registry:
        assert match_fibers(rec.fibers, fiber_configuration(rec.model())) == [], rec.name


def test_read_from_path(tmp_path):
    p = tmp_path / "one.reg"
    p.write_text(M16)
    assert parse_registry(p).names() == ["m16"]


@pytest.mark.parametrize("text,line", [
    ("m = 4\n", 1),
    ("[surface a]\nm = 4\nbogus = 1\n", 3),
    ("[surface a]\nm = 4\na2 = t^^2\n", 3),
    ("[surface a]\nm = 4\na6 = t\n[surface a]\nm = 4\na6 = t\n", 4),
    ("[surface a]\nm = 4\na6 = t\nfibers = I9x:0\n", 4),
    ("[surface a]\nm = 4\na6 = t\nns = U+F4\n", None),
    ("[surface a]\nm = four\n", 2),
    ("[surface a]\nm = 4\na6 = exp(t)\n", 3),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(RegistryError) as exc:
        parse_registry_text(text)
    if line is not None:
        assert f"line {line}" in str(exc.value)


def test_rank_sum_enforced():
    bad = M16.replace("t_lat = U^2 + D4 + E8", "t_lat = U^2 + D4")
    with pytest.raises(RegistryError):
        parse_registry_text(bad)


def test_lambda_literals():
    assert parse_lambda("5") == 5
    assert parse_lambda("-3/2") == Fraction(-3, 2)
    assert parse_lambda("sqrt:3") == QuadElem(0, 1, 3)
    assert parse_lambda("2*sqrt:3") == QuadElem(0, 2, 3)
    assert parse_lambda("1-2*sqrt:3") == QuadElem(1, -2, 3)
    for v in ("5", "-3/2", "sqrt:3", "1-2*sqrt:3"):
        assert parse_lambda(format_lambda(parse_lambda(v))) == parse_lambda(v)
    with pytest.raises(RegistryError):
        parse_lambda("sqrt:4")


def test_poly_strings():
    t = Poly.t()
    assert parse_poly("t^3 - 2*t + 1/2") == t**3 - 2 * t + Fraction(1, 2)
    assert parse_poly("lam*t^4", lam=Fraction(3)) == 3 * t**4
    assert parse_poly("s*t", d=3) == QuadElem.sqrt(3) * t
    with pytest.raises(RegistryError):
        parse_poly("lam*t")
    with pytest.raises(RegistryError):
        parse_poly("__import__('os')")


def test_fibre_specs():
    specs = parse_fibers("I0*:0, II:inf, I1:gen x16")
    assert [str(s) for s in specs] == ["I0*:0", "II:inf", "I1:gen x16"]
    assert parse_fibers("I2:-1/2")[0].place == "-1/2"
