"""Replays of the classification arguments: order constraints, the table of
2-elementary lattices, fixed-curve invariants, Hurwitz bounds, the main
classification table, and the parameter identities of the m=4 family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .ellfib import (
    FiberConfiguration,
    WeierstrassModel,
    c_invariants,
    fiber_configuration,
    j_invariant,
    trivial_lattice,
)
from .exactnum import Poly, QuadElem, euler_phi
from .lattices import (
    delta_invariant,
    discriminant_form,
    form_isomorphic,
    genus_equal,
    lattice_make,
    mirror_check,
    nikulin_triple,
)


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object

    @property
    def ok(self) -> bool:
        return self.expected == self.actual

    def as_dict(self) -> dict:
        return {"name": self.name, "expected": _plain(self.expected),
                "actual": _plain(self.actual), "pass": self.ok}


def _plain(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (tuple, list)):
        return [_plain(x) for x in v]
    return str(v)


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, expected, actual) -> Check:
        c = Check(name, expected, actual)
        self.checks.append(c)
        return c

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    def lines(self) -> list[str]:
        return [f"[{'ok' if c.ok else 'FAIL'}] {c.name}: expected {c.expected}, got {c.actual}"
                for c in self.checks]


# --- order constraints ---------------------------------------------------------

@dataclass(frozen=True)
class OrderSets:
    omega: frozenset = frozenset({12, 28, 36, 42, 44, 66})
    omega1: frozenset = frozenset({3, 9, 27, 5, 25, 7, 11, 13, 17, 19})
    omega2: frozenset = frozenset({2, 4, 8, 16})


ORDERS = OrderSets()


def order_allowed(m: int, unimodular: bool) -> bool:
    if m < 2:
        raise ValueError("order must be at least 2")
    if unimodular:
        return any(w % m == 0 for w in ORDERS.omega)
    return m in ORDERS.omega1 or m in ORDERS.omega2


def phi_divides(m: int, rank_t: int) -> bool:
    if m < 2 or rank_t < 1:
        raise ValueError("need m >= 2 and a positive rank")
    return rank_t % euler_phi(m) == 0


# --- the table of 2-elementary Neron-Severi candidates -------------------------

LATTICE_TABLE: tuple[tuple[int, tuple[int, int, int], str], ...] = (
    (2, (20, 2, 1), "U+A1^2+E8^2"),
    (4, (18, 2, 0), "U+D8+E8"),
    (4, (18, 2, 1), "U+A1+E7+E8"),
    (4, (18, 4, 0), "U+D8^2"),
    (4, (18, 4, 1), "U+A1^2+E7^2"),
    (8, (14, 2, 0), "U+D4+E8"),
    (8, (14, 4, 0), "U+D4+D8"),
    (8, (14, 4, 1), "U+A1^4+E8"),
    (8, (14, 6, 0), "U+D4^3"),
    (8, (14, 6, 1), "U+A1^4+D8"),
    (8, (14, 8, 0), "U(2)+D4^3"),
    (8, (14, 8, 1), "U+A1^4+D4^2"),
    (16, (6, 2, 0), "U+D4"),
    (16, (6, 4, 0), "U(2)+D4"),
    (16, (6, 4, 1), "U+A1^4"),
    (16, (6, 6, 1), "U(2)+A1^4"),
)


def verify_lattice_table() -> Report:
    rep = Report("2-elementary lattice table")
    for m, triple, expr in LATTICE_TABLE:
        L = lattice_make(expr)
        nt = nikulin_triple(L)
        rep.add(f"{expr} triple", triple, nt.triple())
        rep.add(f"{expr} hyperbolic", (1, nt.r - 1), nt.signature)
        rep.add(f"{expr} l <= min(r, 22-r)", True, nt.l <= min(nt.r, 22 - nt.r))
        rep.add(f"{expr} rank T = m", m, 22 - nt.r)
    return rep


# --- fixed curve of the involution -----------------------------------------------

@dataclass(frozen=True)
class FixedCurve:
    kind: str  # "empty", "two-elliptic" or "curve+rational"
    genus: int | None = None
    rational: int | None = None

    def __str__(self):
        if self.kind != "curve+rational":
            return self.kind
        return f"C of genus {self.genus} + {self.rational} rational curves"


def fixed_curve(r: int, l: int, delta: int) -> FixedCurve:
    if (r, l, delta) == (10, 10, 0):
        return FixedCurve("empty")
    if (r, l, delta) == (10, 8, 0):
        return FixedCurve("two-elliptic")
    g2, n2 = 22 - r - l, r - l
    if g2 % 2 or n2 % 2 or g2 < 0 or n2 < 0:
        raise ValueError(f"invalid triple {(r, l, delta)}: genus or curve count not integral")
    return FixedCurve("curve+rational", g2 // 2, n2 // 2)


# --- Hurwitz ----------------------------------------------------------------

@dataclass(frozen=True)
class HurwitzResult:
    genus: int
    degree: int
    ram: int
    quotient_genus: int | None

    @property
    def feasible(self) -> bool:
        return self.quotient_genus is not None

    def __str__(self):
        if self.feasible:
            return f"feasible with quotient genus {self.quotient_genus}"
        return "infeasible"


def hurwitz_feasible(genus: int, degree: int, ram: int) -> HurwitzResult:
    """``2g-2 = d(2g'-2) + ram (d-1)`` for a cyclic cover totally ramified at ``ram`` points."""
    if degree < 2:
        raise ValueError("degree must be at least 2")
    if genus < 0 or ram < 0:
        raise ValueError("genus and ramification count must be nonnegative")
    num = 2 * genus - 2 - ram * (degree - 1)
    if num % degree:
        return HurwitzResult(genus, degree, ram, None)
    twice = num // degree + 2
    if twice < 0 or twice % 2:
        return HurwitzResult(genus, degree, ram, None)
    return HurwitzResult(genus, degree, ram, twice // 2)


def hurwitz_degree_bound(genus: int, ram: int) -> int:
    """Largest d for which the quotient genus can be nonnegative (ram > 2)."""
    if ram <= 2:
        raise ValueError("no degree bound when at most two points ramify")
    return (2 * genus - 2 + ram) // (ram - 2)


def feasible_degrees(genus: int, ram: int, d_min: int = 2) -> list[int]:
    hi = hurwitz_degree_bound(genus, ram)
    return [d for d in range(d_min, hi + 1) if hurwitz_feasible(genus, d, ram).feasible]


@dataclass(frozen=True)
class HurwitzScenario:
    label: str
    genus: int
    ram: int
    d_min: int
    expected_feasible: tuple[int, ...]
    conclusion: str


HURWITZ_SCENARIOS = (
    HurwitzScenario("U+D8^2: rational curve B, 6 fixed points", 0, 6, 2, (),
                    "no d >= 2"),
    HurwitzScenario("U(2)+D4^3: rational curve B, 12 fixed points", 0, 12, 2, (),
                    "no d >= 2"),
    HurwitzScenario("U+D4+D8: genus-2 curve C, 6 fixed points", 2, 6, 2, (2,),
                    "d <= 2, contradicting d >= 4"),
    HurwitzScenario("U(2)+D4: genus-6 curve C under eta, 4 fixed points", 6, 4, 8, (),
                    "no d >= 8"),
    HurwitzScenario("U(2)+D4: genus-6 curve C under eta^4, 22 fixed points", 6, 22, 2, (),
                    "no d >= 2"),
)


def replay_hurwitz() -> Report:
    rep = Report("Hurwitz replays")
    for s in HURWITZ_SCENARIOS:
        got = tuple(feasible_degrees(s.genus, s.ram, 2))
        in_range = tuple(d for d in got if d >= s.d_min)
        rep.add(f"{s.label}: feasible d >= {s.d_min}", s.expected_feasible, in_range)
    return rep


# --- parameter identities ------------------------------------------------------

def legendre_model(gamma) -> WeierstrassModel:
    """``w^2 = u (u - 1)(u - gamma)``."""
    return WeierstrassModel(a2=Poly.const(-(1 + gamma)), a4=Poly.const(gamma))


def j_legendre(gamma):
    if gamma == 0 or gamma == 1:
        raise ValueError("gamma must differ from 0 and 1")
    return 256 * (gamma * gamma - gamma + 1) ** 3 / (gamma * gamma * (gamma - 1) ** 2)


def j_legendre_from_model(gamma):
    if gamma == 0 or gamma == 1:
        raise ValueError("gamma must differ from 0 and 1")
    return j_invariant(legendre_model(gamma))


def lambda_from_gamma(gamma, sqrt_gamma):
    """``lambda = -(1 + gamma) / sqrt(gamma)``, up to the sign of the root."""
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    if sqrt_gamma * sqrt_gamma != gamma:
        raise ValueError("sqrt_gamma does not square to gamma")
    return -(1 + gamma) / sqrt_gamma


def lambda_squared_from_gamma(gamma):
    """``lambda^2 = (1 + gamma)^2 / gamma``; needs no square root of gamma."""
    if gamma == 0:
        raise ValueError("gamma must be nonzero")
    return (1 + gamma) ** 2 / gamma


def load_jlist() -> list[tuple[int, str]]:
    """j-invariants of orders in Z[i], shipped as data."""
    out = []
    text = (resources.files("k3verify") / "data" / "jlist.txt").read_text(encoding="ascii")
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            j, label = line.split(None, 1)
            out.append((int(j), label.strip()))
    return out


def rho20_condition(lam, jlist=None) -> bool:
    """``1728 lambda^3`` is the j-invariant of an order in Z[i]."""
    values = {j for j, _ in (jlist or load_jlist())}
    v = 1728 * lam**3
    if isinstance(v, QuadElem):
        if not v.is_rational():
            return False
        v = v.a
    v = Fraction(v)
    return v.denominator == 1 and int(v) in values


def rho20_lambdas(jlist=None) -> list[Fraction]:
    """Rational lambdas meeting the condition (j/1728 must be a rational cube)."""
    out = []
    for j, _ in jlist or load_jlist():
        x = Fraction(j, 1728)
        num, den = _icbrt(x.numerator), _icbrt(x.denominator)
        if num is not None and den is not None:
            out.append(Fraction(num, den))
    return sorted(out)


def _icbrt(n: int) -> int | None:
    s = -1 if n < 0 else 1
    r = round(abs(n) ** (1 / 3))
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == abs(n):
            return s * c
    return None


def translate_x(W: WeierstrassModel, r: Poly) -> WeierstrassModel:
    """Substitute ``x -> x + r`` in a model with ``a1 = a3 = 0``."""
    if not (W.a1.is_zero() and W.a3.is_zero()):
        raise ValueError("translate_x expects a1 = a3 = 0")
    a2, a4, a6 = W.a2, W.a4, W.a6
    return WeierstrassModel(
        a2=a2 + 3 * r,
        a4=a4 + 2 * a2 * r + 3 * r * r,
        a6=a6 + a4 * r + a2 * r * r + r**3,
        param=W.param,
        name=W.name,
    )


def delsarte_minus2_model(m: int) -> WeierstrassModel:
    """``y^2 = x^3 + t x^2 + t^(3 + m/2)``, the member at lambda=-2 in Delsarte form."""
    t = Poly.t()
    return WeierstrassModel(a2=t, a6=t ** (3 + m // 2))


# --- main classification table -----------------------------------------------

CLASSIFICATION_ROWS = ("m2", "m4u", "m4", "m8", "m16")
SAMPLES = (Fraction(1), Fraction(5), Fraction(7))
# lambda values where a family leaves its generic configuration
DEGENERATE = {"m4u": {Fraction(1)}}
MIRROR_PAIRS = (
    ("U^2+D4+E8", "U+D4+E8"),  # T of m=16 against NS of m=8
    ("U+U(2)", "U(2)"),
    ("U^2", "U"),
)


def check_record(rec, lam=None, report: Report | None = None) -> Report:
    """Fibres, trivial lattice, NS/T genus and rank checks for one registry record."""
    rep = report or Report(f"surface {rec.name}")
    from .registry import match_fibers

    W = rec.model(lam)
    C = fiber_configuration(W)
    tag = rec.name if lam is None else f"{rec.name} lambda={lam}"
    rep.add(f"{tag} fibres", [], match_fibers(rec.fibers, C))
    k = W.twist_degree
    rep.add(f"{tag} Euler number", 12 * k, C.total_euler)
    if rec.ns:
        NS = lattice_make(rec.ns)
        rep.add(f"{tag} trivial lattice genus = NS", True, genus_equal(trivial_lattice(C), NS))
        if rec.t_lat:
            T = lattice_make(rec.t_lat)
            rep.add(f"{tag} rank NS + rank T", 22, NS.rank + T.rank)
            rep.add(f"{tag} A_NS = -A_T", True,
                    form_isomorphic(discriminant_form(NS), discriminant_form(T), negate=True))
            rep.add(f"{tag} signature T", (2, T.rank - 2), T.signature)
    return rep


def verify_classification(registry, samples=SAMPLES) -> Report:
    rep = Report("classification table")
    for name in CLASSIFICATION_ROWS:
        rec = registry.get(name)
        if not rec.uses_lambda():
            check_record(rec, report=rep)
        else:
            for lam in samples:
                if lam in DEGENERATE.get(name, ()):
                    continue
                check_record(rec, lam, rep)
        if rec.t_lat:
            T = lattice_make(rec.t_lat)
            rep.add(f"{name} phi(m) | rank T", True, phi_divides(rec.m, T.rank))
            if rec.m > 2:
                rep.add(f"{name} rank T = m", rec.m, T.rank)
    # lambda^3 = 1 on the unimodular family: two extra I2 fibres
    C = fiber_configuration(registry.get("m4u").model(Fraction(1)))
    rep.add("m4u lambda=1 I2 count", 2, C.type_counts().get("I2", 0))
    rep.add("m2 discriminant", -4, lattice_make(registry.get("m2").ns).det)
    for t_expr, ns in MIRROR_PAIRS:
        rep.add(f"mirror {t_expr} = U + {ns}", True, mirror_check(t_expr, ns))
    return rep


def degeneration_report(registry) -> Report:
    """Special members at lambda = +-2 and lambda = sqrt 3."""
    rep = Report("degenerations")
    s3 = QuadElem(0, 1, 3)
    expect = {
        "m4": ("I6*", 2), "m8": ("I4*", 4), "m16": ("I8*", 8),
    }
    for name, (star, n_ii) in expect.items():
        rec = registry.get(name)
        for lam in (Fraction(2), Fraction(-2)):
            C = fiber_configuration(rec.model(lam))
            rep.add(f"{name} lambda={lam} fibre at 0", star, _kind_at_zero(C))
        C = fiber_configuration(rec.model(s3))
        counts = C.type_counts()
        extra = 1 if (C.at_infinity() and C.at_infinity().kind == "II") else 0
        rep.add(f"{name} lambda=sqrt3 finite II fibres", n_ii, counts.get("II", 0) - extra)
        rep.add(f"{name} lambda=sqrt3 no I1", 0, counts.get("I1", 0))
    return rep


def _kind_at_zero(C: FiberConfiguration) -> str | None:
    for f in C.fibers:
        if f.vanishes_at(0):
            return f.kind
    return None


def discriminant_closed_form(m: int, lam) -> Poly:
    """``-16 t^e (27 t^{2k} + (4 lam^3 - 18 lam) t^k + 4 - lam^2)`` for the families.

    ``(e, k) = (10, 2), (6, 4), (6, 8)`` for m = 4, 8, 16.
    """
    e, k = {4: (10, 2), 8: (6, 4), 16: (6, 8)}[m]
    t = Poly.t()
    inner = 27 * t ** (2 * k) + (4 * lam**3 - 18 * lam) * t**k + (4 - lam * lam)
    return -16 * t**e * inner


def family_model(m: int, lam) -> WeierstrassModel:
    t = Poly.t()
    if m == 4:
        return WeierstrassModel(a2=t, a4=lam * t**4, a6=t**7)
    if m == 8:
        return WeierstrassModel(a2=lam * t, a4=t**2, a6=t**7)
    if m == 16:
        return WeierstrassModel(a2=lam * t, a4=t**2, a6=t**11)
    raise ValueError(f"no one-parameter family for m={m}")


def discriminant_matches(m: int, lam) -> bool:
    return c_invariants(family_model(m, lam)).disc == discriminant_closed_form(m, lam)


def overlattice_check() -> tuple[tuple[int, int, int], list[tuple[tuple[int, ...], tuple[int, int, int]]]]:
    """Triples of all even index-2 overlattices of U+A1^2+E7^2, and that of U+D8+E8."""
    from .lattices import isotropic_glues, overlattice

    L = lattice_make("U+A1^2+E7^2")
    target = nikulin_triple(lattice_make("U+D8+E8")).triple()
    rows = [(g, nikulin_triple(overlattice(L, g)).triple()) for g in isotropic_glues(L)]
    return target, sorted(rows)


def replay_all(registry) -> list[Report]:
    return [verify_lattice_table(), replay_hurwitz(), verify_classification(registry), degeneration_report(registry)]



# --- aggregate suite ---------------------------------------------------------------

DYNKIN_TABLE = (
    ("A1", (1, 1)), ("E7", (1, 1)), ("E8", (0, 0)),
    ("D4", (2, 0)), ("D8", (2, 0)), ("D6", (2, 1)), ("D10", (2, 1)),
)
EULER_OVERRIDES = {"Y": 36, "Z": 12}


def dynkin_report() -> Report:
    rep = Report("Dynkin invariants")
    for expr, want in DYNKIN_TABLE:
        # negative definite root lattices: A_L is 2-elementary, delta is read off q
        F = discriminant_form(lattice_make(expr))
        rep.add(f"{expr} (l, delta)", want, (F.length, delta_invariant(F)))
    return rep


def euler_report(registry, samples=SAMPLES) -> Report:
    """Total Euler number of every record at every sampled parameter."""
    rep = Report("Euler numbers")
    for rec in registry:
        want = EULER_OVERRIDES.get(rec.name, 24)
        lams = [None] if not rec.uses_lambda() else [
            lam for lam in samples if lam not in DEGENERATE.get(rec.name, ())
        ]
        for lam in lams:
            C = fiber_configuration(rec.model(lam))
            tag = rec.name if lam is None else f"{rec.name} lambda={lam}"
            rep.add(f"{tag} sum e(F)", want, C.total_euler)
    return rep


def overlattice_report() -> Report:
    rep = Report("index-2 overlattice")
    target, rows = overlattice_check()
    triples = {t for _, t in rows}
    rep.add("U+D8+E8 triple", (18, 2, 0), target)
    rep.add("some even overlattice of U+A1^2+E7^2 has that triple", True, target in triples)
    return rep


def identities_report(n_gamma: int = 20, seed: int = 20100) -> Report:
    import random

    rep = Report("parameter identities")
    rep.add("D-2 model for m=8 = m=4 family at lambda=0", True,
            delsarte_minus2_model(8) == family_model(4, Fraction(0)))
    for m in (8, 16):
        moved = translate_x(family_model(m, Fraction(-2)), Poly.t())
        rep.add(f"m={m} lambda=-2 moved by x -> x + t is the D-2 model", True,
                moved.coeffs == delsarte_minus2_model(m).coeffs)
    rng = random.Random(seed)
    agree = 0
    for _ in range(n_gamma):
        g = Fraction(0)
        while g in (0, 1):
            g = Fraction(rng.randint(-50, 50), rng.randint(1, 20))
        agree += j_legendre(g) == j_legendre_from_model(g)
    rep.add(f"j_legendre matches c-invariant j at {n_gamma} random gamma", n_gamma, agree)
    rep.add("gamma=1 gives lambda=-2", Fraction(-2), lambda_from_gamma(Fraction(1), Fraction(1)))
    rep.add("rho=20 rational lambdas", [Fraction(1), Fraction(11, 2)], rho20_lambdas())
    for m in (4, 8, 16):
        rep.add(f"m={m} discriminant closed form", True,
                all(discriminant_matches(m, Fraction(v)) for v in (-3, 0, 1, 5, 7)))
    return rep


def acceptance_reports(registry, threads: int = 1) -> list[Report]:
    """Every reproduction check, as run by ``k3verify verify all``."""
    from . import delsarte

    return [
        dynkin_report(),
        verify_lattice_table(),
        verify_classification(registry),
        degeneration_report(registry),
        euler_report(registry),
        overlattice_report(),
        replay_hurwitz(),
        delsarte.orbit_table_report(),
        delsarte.weil_report(threads=threads),
        delsarte.lefschetz_report(threads=threads),
        identities_report(),
    ]
