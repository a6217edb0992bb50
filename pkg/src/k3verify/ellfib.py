"""Weierstrass models over Q(t) or Q(sqrt d)(t) and their singular fibres.

Fibres are classified from the valuations of ``c4``, ``c6`` and the
discriminant (residue characteristic 0). Finite places are the monic
squarefree factors of a gcd-free basis of ``{c4, c6, disc}``; a factor of
degree ``d`` stands for ``d`` conjugate fibres of the same type.
"""
from __future__ import annotations

import logging
import math
import re
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .exactnum import Poly, coprime_refinement, valuation
from .lattices import Lattice, canonical_expr, lattice_make

log = logging.getLogger(__name__)

INF = "inf"
Place = Union[Poly, str]


class FibrationError(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassModel:
    """``y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`` with polynomial coefficients in t."""

    a1: Poly = field(default_factory=Poly)
    a2: Poly = field(default_factory=Poly)
    a3: Poly = field(default_factory=Poly)
    a4: Poly = field(default_factory=Poly)
    a6: Poly = field(default_factory=Poly)
    param: object = None
    name: str | None = None

    @property
    def coeffs(self) -> tuple[Poly, Poly, Poly, Poly, Poly]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def twist_degree(self) -> int:
        """Smallest k with deg(a_i) <= i*k."""
        k = 0
        for w, a in zip((1, 2, 3, 4, 6), self.coeffs):
            if not a.is_zero():
                k = max(k, -(-a.degree // w))
        return k

    def radicand(self) -> int | None:
        ds = {a.radicand() for a in self.coeffs} - {None}
        if len(ds) > 1:
            raise FibrationError("coefficients mix different quadratic fields")
        return ds.pop() if ds else None

    def at_infinity(self) -> "WeierstrassModel":
        """Model in s = 1/t: a_i(t) -> s^(i k) a_i(1/s)."""
        k = self.twist_degree
        new = [a.reversed_to(w * k) for w, a in zip((1, 2, 3, 4, 6), self.coeffs)]
        return WeierstrassModel(*new, param=self.param, name=self.name)


@dataclass(frozen=True)
class CInvariants:
    b2: Poly
    b4: Poly
    b6: Poly
    b8: Poly
    c4: Poly
    c6: Poly
    disc: Poly


def c_invariants(W: WeierstrassModel) -> CInvariants:
    a1, a2, a3, a4, a6 = W.coeffs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    disc = -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if c4 ** 3 - c6 * c6 != 1728 * disc:
        raise AssertionError("c4^3 - c6^2 != 1728 disc")
    return CInvariants(b2, b4, b6, b8, c4, c6, disc)


def j_invariant(W: WeierstrassModel):
    """j = c4^3 / disc for a model with constant coefficients."""
    if any(not a.is_constant() for a in W.coeffs):
        raise FibrationError("j_invariant needs constant coefficients")
    ci = c_invariants(W)
    d = ci.disc[0]
    if not d:
        raise FibrationError("singular curve has no j-invariant")
    return ci.c4[0] ** 3 / d


# --- Kodaira classification -------------------------------------------------

EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}
COMPONENTS = {"II": 1, "III": 2, "IV": 3, "IV*": 7, "III*": 8, "II*": 9}
_POT_GOOD = {0: "I0", 2: "II", 3: "III", 4: "IV", 6: "I0*", 8: "IV*", 9: "III*", 10: "II*"}


_IN = re.compile(r"^I(\d+)(\*?)$")


def parse_kind(kind: str) -> tuple[int, bool] | None:
    """``(n, starred)`` for I_n / I_n^*, None for the other Kodaira symbols."""
    m = _IN.match(kind)
    if m:
        return int(m.group(1)), bool(m.group(2))
    if kind not in EULER:
        raise FibrationError(f"unknown Kodaira type {kind!r}")
    return None


def euler_number(kind: str) -> int:
    nk = parse_kind(kind)
    if nk:
        return nk[0] + 6 if nk[1] else nk[0]
    return EULER[kind]


def component_count(kind: str) -> int:
    nk = parse_kind(kind)
    if nk:
        return nk[0] + 5 if nk[1] else max(nk[0], 1)
    return COMPONENTS[kind]


def dynkin_symbol(kind: str) -> str | None:
    """Root lattice spanned by the fibre components missing the zero section."""
    nk = parse_kind(kind)
    if nk:
        n, starred = nk
        if starred:
            return f"D{n + 4}"
        return f"A{n - 1}" if n >= 2 else None
    return {"III": "A1", "IV": "A2", "IV*": "E6", "III*": "E7", "II*": "E8"}.get(kind)


def _matches_table(kind: str, vc4, vc6, vd) -> bool:
    nk = parse_kind(kind)
    if kind == "I0":
        return vd == 0
    if nk and not nk[1]:
        return vc4 == 0 and vc6 == 0 and vd == nk[0]
    if kind == "II":
        return vc4 >= 1 and vc6 == 1 and vd == 2
    if kind == "III":
        return vc4 == 1 and vc6 >= 2 and vd == 3
    if kind == "IV":
        return vc4 >= 2 and vc6 == 2 and vd == 4
    if kind == "I0*":
        return vd == 6 and vc4 >= 2 and vc6 >= 3 and (vc4 == 2 or vc6 == 3)
    if nk and nk[1]:
        return vc4 == 2 and vc6 == 3 and vd == 6 + nk[0]
    if kind == "IV*":
        return vc4 >= 3 and vc6 == 4 and vd == 8
    if kind == "III*":
        return vc4 == 3 and vc6 >= 5 and vd == 9
    if kind == "II*":
        return vc4 >= 4 and vc6 == 5 and vd == 10
    return False


def classify_valuations(vc4, vc6, vd) -> tuple[str, tuple, int]:
    """Kodaira type from (v(c4), v(c6), v(disc)) after minimalising.

    Returns the type, the minimal valuation triple and the number of
    (u^2 x, u^3 y) rescalings that were needed.
    """
    if vd == math.inf:
        raise FibrationError("discriminant vanishes identically")
    shifts = 0
    while vc4 >= 4 and vc6 >= 6 and vd >= 12:
        vc4, vc6, vd = vc4 - 4, vc6 - 6, vd - 12
        shifts += 1
    if vd == 0:
        kind = "I0"
    elif vc4 == 0:
        kind = f"I{vd}"
    elif vc4 == 2 and vc6 == 3 and vd > 6:
        kind = f"I{vd - 6}*"
    elif 3 * vc4 >= vd and vd in _POT_GOOD:
        kind = _POT_GOOD[vd]
    else:
        raise FibrationError(f"valuation triple {(vc4, vc6, vd)} is outside the Kodaira table")
    if not _matches_table(kind, vc4, vc6, vd):
        raise FibrationError(f"valuation triple {(vc4, vc6, vd)} inconsistent with type {kind}")
    return kind, (vc4, vc6, vd), shifts


@dataclass(frozen=True)
class KodairaFiber:
    place: Place
    kind: str
    vals: tuple
    degree: int = 1

    @property
    def components(self) -> int:
        return component_count(self.kind)

    @property
    def euler(self) -> int:
        return euler_number(self.kind)

    @property
    def dynkin(self) -> str | None:
        return dynkin_symbol(self.kind)

    def place_str(self) -> str:
        return INF if self.place == INF else str(self.place)

    def vanishes_at(self, r) -> bool:
        return self.place != INF and self.place(r) == 0


@dataclass(frozen=True)
class FiberConfiguration:
    fibers: tuple[KodairaFiber, ...]

    @property
    def total_euler(self) -> int:
        return sum(f.euler * f.degree for f in self.fibers)

    def type_counts(self) -> Counter:
        c: Counter = Counter()
        for f in self.fibers:
            c[f.kind] += f.degree
        return c

    def at_infinity(self) -> KodairaFiber | None:
        return next((f for f in self.fibers if f.place == INF), None)

    def summary(self) -> str:
        parts = []
        for kind, n in sorted(self.type_counts().items(), key=lambda kv: (-euler_number(kv[0]), kv[0])):
            parts.append(kind if n == 1 else f"{n}x{kind}")
        return " + ".join(parts)


def _vals_inf(ci: CInvariants, k: int):
    def v(f: Poly, w: int):
        return math.inf if f.is_zero() else w * k - f.degree

    return v(ci.c4, 4), v(ci.c6, 6), v(ci.disc, 12)


def kodaira_at(W: WeierstrassModel, place: Place, ci: CInvariants | None = None) -> KodairaFiber:
    ci = ci or c_invariants(W)
    if ci.disc.is_zero():
        raise FibrationError("discriminant vanishes identically")
    if place == INF:
        vals = _vals_inf(ci, W.twist_degree)
        degree = 1
    else:
        if place.is_constant():
            raise FibrationError("a finite place must be a non-constant polynomial")
        vals = tuple(valuation(f, place) for f in (ci.c4, ci.c6, ci.disc))
        degree = int(place.degree)
    kind, minimal, shifts = classify_valuations(*vals)
    if shifts:
        log.warning("non-minimal model at %s; rescaled %d time(s)", place, shifts)
    return KodairaFiber(place, kind, minimal, degree)


def bad_places(W: WeierstrassModel, ci: CInvariants | None = None) -> list[Place]:
    ci = ci or c_invariants(W)
    if ci.disc.is_zero():
        raise FibrationError("discriminant vanishes identically")
    polys = [f for f in (ci.c4, ci.c6, ci.disc) if not f.is_zero()]
    basis, _ = coprime_refinement(polys)
    places: list[Place] = [b for b in basis if valuation(ci.disc, b) > 0]
    if _vals_inf(ci, W.twist_degree)[2] > 0:
        places.append(INF)
    return places


def fiber_configuration(W: WeierstrassModel) -> FiberConfiguration:
    ci = c_invariants(W)
    fibers = [kodaira_at(W, p, ci) for p in bad_places(W, ci)]
    return FiberConfiguration(tuple(f for f in fibers if f.kind != "I0"))


def trivial_lattice(C: FiberConfiguration, has_section: bool = True) -> Lattice:
    """U plus the Dynkin lattices of the reducible fibres."""
    if not has_section:
        raise FibrationError("trivial lattice is only assembled for fibrations with a section")
    terms = ["U"]
    for f in C.fibers:
        if f.dynkin:
            terms.extend([f.dynkin] * f.degree)
    expr = canonical_expr("+".join(terms))
    L = lattice_make(expr)
    return L


@dataclass(frozen=True)
class ScanEntry:
    param: object
    config: FiberConfiguration
    changed: bool
    error: str | None = None


def degeneration_scan(
    family: Callable[[object], WeierstrassModel],
    lambdas: Sequence,
    generic: Counter | None = None,
    threads: int = 1,
) -> list[ScanEntry]:
    """Fibre configuration at each parameter; flags those differing from ``generic``.

    Without ``generic`` the most frequent configuration among the samples is used.
    """

    def one(lam):
        try:
            return fiber_configuration(family(lam)), None
        except FibrationError as exc:
            return None, str(exc)

    if threads > 1 and len(lambdas) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, lambdas))
    else:
        results = [one(lam) for lam in lambdas]
    if generic is None:
        sigs = Counter(frozenset(c.type_counts().items()) for c, _ in results if c is not None)
        generic = Counter(dict(sigs.most_common(1)[0][0])) if sigs else Counter()
    out = []
    for lam, (conf, err) in zip(lambdas, results):
        if conf is None:
            out.append(ScanEntry(lam, FiberConfiguration(()), True, err))
        else:
            out.append(ScanEntry(lam, conf, conf.type_counts() != generic))
    return out
