"""Line-oriented registry of surfaces.

Format::

    # comment
    [surface m8]
    m = 8
    field = Q
    lambda = 5
    a2 = lam*t
    a4 = t^2
    a6 = t^7
    fibers = I0*:0, II*:inf, I1:gen x8
    ns = U+D4+E8
    t_lat = U^2+D4
    cover = 16,17

Polynomial entries use ``t``, the parameter ``lam`` and ``s`` for the square
root of the field's radicand. A ``lambda`` is a rational literal, ``sqrt:D``,
``C*sqrt:D`` or ``A+C*sqrt:D``.
"""
from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable

from .ellfib import INF, FiberConfiguration, WeierstrassModel, parse_kind
from .exactnum import Poly, QuadElem
from .lattices import LatticeError, lattice_make

COEFF_KEYS = ("a1", "a2", "a3", "a4", "a6")
KEYS = ("m", "field", "lambda", *COEFF_KEYS, "fibers", "ns", "t_lat", "cover")
_HEADER = re.compile(r"^\[surface\s+([A-Za-z0-9_.\-]+)\]$")
_FIELD = re.compile(r"^Q(?:\(sqrt(-?\d+)\))?$")
_LAMBDA = re.compile(
    r"^(?:(?P<a>-?\d+(?:/\d+)?)(?P<sign>[+-]))?(?:(?P<c>\d+(?:/\d+)?)\*)?sqrt:(?P<d>-?\d+)$"
)
_FIBER = re.compile(r"^(?P<kind>[IV0-9*]+):(?P<place>[^\sx]+)(?:\s*x(?P<mult>\d+))?$")


class RegistryError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        super().__init__(f"line {line}: {msg}" if line else msg)
        self.line = line


# --- values --------------------------------------------------------------

def parse_lambda(text: str, d: int | None = None):
    """Parse a lambda literal to ``Fraction`` or ``QuadElem``."""
    text = text.replace(" ", "")
    try:
        return Fraction(text)
    except ValueError:
        pass
    mt = _LAMBDA.match(text)
    if not mt:
        raise RegistryError(f"bad lambda literal {text!r}")
    rd = int(mt["d"])
    if d is not None and rd != d:
        raise RegistryError(f"lambda uses sqrt {rd} but the field is Q(sqrt {d})")
    a = Fraction(mt["a"]) if mt["a"] else Fraction(0)
    c = Fraction(mt["c"]) if mt["c"] else Fraction(1)
    if mt["sign"] == "-":
        c = -c
    try:
        return QuadElem(a, c, rd)
    except ValueError as exc:
        raise RegistryError(str(exc)) from exc


def format_lambda(value) -> str:
    if isinstance(value, QuadElem):
        if value.b == 0:
            return str(value.a)
        coef = "" if abs(value.b) == 1 else f"{abs(value.b)}*"
        if value.a == 0:
            return f"{'-' if value.b < 0 else ''}{coef}sqrt:{value.d}"
        return f"{value.a}{'-' if value.b < 0 else '+'}{coef}sqrt:{value.d}"
    return str(Fraction(value))


_ALLOWED_BIN = {ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div}


def parse_poly(text: str, lam=None, d: int | None = None) -> Poly:
    """Evaluate a polynomial string in ``t`` with symbols ``lam`` and ``s``."""
    src = text.replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise RegistryError(f"cannot parse polynomial {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Poly.const(node.value)
        if isinstance(node, ast.Name):
            if node.id == "t":
                return Poly.t()
            if node.id == "lam":
                if lam is None:
                    raise RegistryError("polynomial uses lam but no lambda is set")
                return Poly.const(lam)
            if node.id == "s":
                if d is None:
                    raise RegistryError("polynomial uses s over Q")
                return Poly.const(QuadElem(0, 1, d))
            raise RegistryError(f"unknown symbol {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _ALLOWED_BIN:
            a, b = ev(node.left), ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if not b.is_constant() or b.is_zero():
                raise RegistryError("division only by nonzero constants")
            if isinstance(node.op, ast.Div):
                return a.scale(1 / b[0])
            e = b[0]
            if isinstance(e, QuadElem) or Fraction(e).denominator != 1 or e < 0:
                raise RegistryError("exponents must be nonnegative integers")
            return a ** int(e)
        raise RegistryError(f"unsupported syntax in {text!r}")

    return ev(tree)


@dataclass(frozen=True)
class FiberSpec:
    kind: str
    place: str  # rational literal, "inf" or "gen"
    mult: int = 1

    def __str__(self):
        return f"{self.kind}:{self.place}" + (f" x{self.mult}" if self.mult != 1 else "")


def parse_fibers(text: str) -> tuple[FiberSpec, ...]:
    out = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        mt = _FIBER.match(part)
        try:
            if not mt:
                raise ValueError
            parse_kind(mt["kind"])
        except ValueError as exc:
            raise RegistryError(f"bad fibre entry {part!r}") from exc
        place = mt["place"]
        if place not in (INF, "gen"):
            try:
                place = str(Fraction(place))
            except ValueError as exc:
                raise RegistryError(f"bad fibre place {place!r}") from exc
        out.append(FiberSpec(mt["kind"], place, int(mt["mult"] or 1)))
    return tuple(out)


# --- records -------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceRecord:
    name: str
    m: int
    field: int | None = None  # radicand d of Q(sqrt d), None for Q
    lam: object = None
    coeffs: tuple[tuple[str, str], ...] = ()
    fibers: tuple[FiberSpec, ...] = ()
    ns: str | None = None
    t_lat: str | None = None
    cover: tuple[int, int] | None = None
    comments: tuple[str, ...] = dc_field(default=(), compare=False)

    def coeff_text(self, key: str) -> str | None:
        return dict(self.coeffs).get(key)

    def uses_lambda(self) -> bool:
        return any(re.search(r"\blam\b", v) for _, v in self.coeffs)

    def model(self, lam=None) -> WeierstrassModel:
        lam = self.lam if lam is None else lam
        d = self.field
        if isinstance(lam, QuadElem) and lam.b != 0:
            if d is None:
                d = lam.d
            elif d != lam.d:
                raise RegistryError(f"lambda in Q(sqrt {lam.d}) but record field is Q(sqrt {d})")
        polys = {k: parse_poly(v, lam, d) for k, v in self.coeffs}
        return WeierstrassModel(*(polys.get(k, Poly()) for k in COEFF_KEYS), param=lam, name=self.name)

    def with_lambda(self, lam) -> "SurfaceRecord":
        return replace(self, lam=lam)

    def validate(self, line: int | None = None) -> None:
        try:
            ns = lattice_make(self.ns) if self.ns else None
            tl = lattice_make(self.t_lat) if self.t_lat else None
        except LatticeError as exc:
            raise RegistryError(f"{self.name}: {exc}", line) from exc
        if ns is not None and tl is not None and ns.rank + tl.rank != 22:
            raise RegistryError(f"{self.name}: rank NS + rank T = {ns.rank + tl.rank}, not 22", line)
        try:
            self.model()
        except (RegistryError, ValueError, TypeError) as exc:
            raise RegistryError(f"{self.name}: {exc}", line) from exc


@dataclass(frozen=True)
class Registry:
    records: tuple[SurfaceRecord, ...] = ()

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def names(self) -> list[str]:
        return [r.name for r in self.records]

    def get(self, name: str) -> SurfaceRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(f"unknown surface {name!r}")


def parse_registry_text(text: str) -> Registry:
    records: list[SurfaceRecord] = []
    cur: dict | None = None
    start = 0
    pending_comments: list[str] = []

    def finish():
        if cur is None:
            return
        rec = _build(cur, start)
        if rec.name in {r.name for r in records}:
            raise RegistryError(f"duplicate surface {rec.name!r}", start)
        records.append(rec)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            pending_comments.append(line[1:].strip())
            continue
        mt = _HEADER.match(line)
        if mt:
            finish()
            cur = {"name": mt[1], "_comments": tuple(pending_comments), "_lines": {}}
            pending_comments = []
            start = lineno
            continue
        if cur is None:
            raise RegistryError("entry outside a [surface NAME] section", lineno)
        if "=" not in line:
            raise RegistryError(f"expected 'key = value', got {line!r}", lineno)
        key, value = (x.strip() for x in line.split("=", 1))
        if key not in KEYS:
            raise RegistryError(f"unknown key {key!r}", lineno)
        if key in cur:
            raise RegistryError(f"duplicate key {key!r}", lineno)
        cur[key] = value
        cur["_lines"][key] = lineno
    finish()
    return Registry(tuple(records))


def _build(cur: dict, start: int) -> SurfaceRecord:
    lines = cur["_lines"]

    def fail(key, msg):
        raise RegistryError(f"{cur['name']}: {msg}", lines.get(key, start))

    if "m" not in cur:
        fail("m", "missing key 'm'")
    try:
        m = int(cur["m"])
    except ValueError:
        fail("m", f"bad m {cur['m']!r}")
    d = None
    if "field" in cur:
        mt = _FIELD.match(cur["field"].replace(" ", ""))
        if not mt:
            fail("field", f"bad field {cur['field']!r}")
        d = int(mt[1]) if mt[1] else None
    lam = None
    if "lambda" in cur:
        try:
            lam = parse_lambda(cur["lambda"], d)
        except RegistryError as exc:
            fail("lambda", str(exc))
    coeffs = tuple((k, " ".join(cur[k].split())) for k in COEFF_KEYS if k in cur)
    if not coeffs:
        fail("a6", "no Weierstrass coefficients")
    for k, v in coeffs:
        try:
            parse_poly(v, lam if lam is not None else Fraction(0), d)
        except RegistryError as exc:
            fail(k, str(exc))
    fibers: tuple[FiberSpec, ...] = ()
    if "fibers" in cur:
        try:
            fibers = parse_fibers(cur["fibers"])
        except RegistryError as exc:
            fail("fibers", str(exc))
    cover = None
    if "cover" in cur:
        try:
            n, q = (int(x) for x in cur["cover"].split(","))
        except ValueError:
            fail("cover", f"bad cover {cur['cover']!r}; expected 'n,q'")
        cover = (n, q)
    rec = SurfaceRecord(
        name=cur["name"], m=m, field=d, lam=lam, coeffs=coeffs, fibers=fibers,
        ns=cur.get("ns"), t_lat=cur.get("t_lat"), cover=cover, comments=cur["_comments"],
    )
    rec.validate(start)
    return rec


def parse_registry(path: str | Path) -> Registry:
    return parse_registry_text(Path(path).read_text(encoding="ascii"))


def serialize_record(r: SurfaceRecord) -> str:
    out = [f"# {c}" if c else "#" for c in r.comments]
    out.append(f"[surface {r.name}]")
    out.append(f"m = {r.m}")
    out.append(f"field = {'Q' if r.field is None else f'Q(sqrt {r.field})'}")
    if r.lam is not None:
        out.append(f"lambda = {format_lambda(r.lam)}")
    out.extend(f"{k} = {v}" for k, v in r.coeffs)
    if r.fibers:
        out.append("fibers = " + ", ".join(map(str, r.fibers)))
    if r.ns:
        out.append(f"ns = {r.ns}")
    if r.t_lat:
        out.append(f"t_lat = {r.t_lat}")
    if r.cover:
        out.append(f"cover = {r.cover[0]},{r.cover[1]}")
    return "\n".join(out) + "\n"


def serialize_registry(reg: Iterable[SurfaceRecord]) -> str:
    return "\n".join(serialize_record(r) for r in reg)


def default_registry_path() -> Path:
    return Path(str(resources.files("k3verify") / "data" / "surfaces.reg"))


def load_default() -> Registry:
    return parse_registry(default_registry_path())


# --- comparing fibre lists ---------------------------------------------------

def _place_key(f) -> str:
    if f.place == INF:
        return INF
    if f.degree == 1:
        root = -f.place[0]
        if not isinstance(root, QuadElem):
            return str(Fraction(root))
    return "gen"


def computed_specs(C: FiberConfiguration) -> list[FiberSpec]:
    """Fibre list in registry notation; irrational places are grouped as ``gen``."""
    explicit, gen = [], {}
    for f in C.fibers:
        key = _place_key(f)
        if key == "gen":
            gen[f.kind] = gen.get(f.kind, 0) + f.degree
        else:
            explicit.append(FiberSpec(f.kind, key))
    explicit.sort(key=lambda s: (s.place != INF, s.place, s.kind))
    return explicit + [FiberSpec(k, "gen", n) for k, n in sorted(gen.items())]


def match_fibers(expected: Iterable[FiberSpec], C: FiberConfiguration) -> list[str]:
    """Differences between expected and computed fibres; empty when they agree.

    Explicit places must be present with the right type; everything else is
    compared by type and count against the ``gen`` entries.
    """
    problems = []
    remaining = []
    for f in C.fibers:
        remaining.append((f.kind, _place_key(f), f.degree))
    gen_expected: dict[str, int] = {}
    for e in expected:
        if e.place == "gen":
            gen_expected[e.kind] = gen_expected.get(e.kind, 0) + e.mult
            continue
        hit = next((r for r in remaining if r[1] == e.place and r[0] == e.kind), None)
        if hit is None:
            problems.append(f"missing {e}")
        else:
            remaining.remove(hit)
    gen_found: dict[str, int] = {}
    for kind, _, deg in remaining:
        gen_found[kind] = gen_found.get(kind, 0) + deg
    if gen_found != gen_expected:
        problems.append(f"other fibres {sorted(gen_found.items())} != expected {sorted(gen_expected.items())}")
    return problems
