"""Fermat and Delsarte surfaces: characters, Jacobi sums, zeta functions, point counts.

Characters of the Fermat surface ``x0^n + x1^n + x2^n + x3^n = 0`` are
quadruples ``(a0, a1, a2, a3)`` of nonzero residues mod n summing to 0. A
Delsarte model covered by the Fermat surface through monomial maps only sees
the characters fixed by the covering group ``G``; their Jacobi sums are the
transcendental Frobenius eigenvalues.

Characters are normalised as ``chi(g**k) = zeta_n**k`` for the stored
generator ``g`` of the field. Orbit sums do not depend on that choice.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .ellfib import (
    INF,
    FiberConfiguration,
    WeierstrassModel,
    c_invariants,
    fiber_configuration,
)
from .exactnum import CycInt, Fq, Poly, QuadElem, euler_phi, units_mod

MAX_FERMAT_Q = 512


class DelsarteError(ValueError):
    pass


# --- characters ----------------------------------------------------------

@dataclass(frozen=True, order=True)
class CharVec:
    n: int
    a: tuple[int, int, int, int]

    @classmethod
    def from_triple(cls, n: int, a1: int, a2: int, a3: int) -> "CharVec":
        """Complete ``(a1, a2, a3)`` with ``a0 = -(a1 + a2 + a3)``."""
        return cls(n, ((-(a1 + a2 + a3)) % n, a1 % n, a2 % n, a3 % n))

    @property
    def triple(self) -> tuple[int, int, int]:
        return self.a[1:]

    def is_valid(self) -> bool:
        return all(x % self.n for x in self.a) and sum(self.a) % self.n == 0

    def scaled(self, s: int) -> "CharVec":
        return CharVec(self.n, tuple(s * x % self.n for x in self.a))


def char_group(n: int) -> list[CharVec]:
    """All characters of the degree-n Fermat surface, sorted."""
    if n < 3:
        raise DelsarteError("Fermat degree must be at least 3")
    out = []
    for a1, a2, a3 in itertools.product(range(1, n), repeat=3):
        c = CharVec.from_triple(n, a1, a2, a3)
        if c.a[0]:
            out.append(c)
    return out


def orbit(alpha: CharVec) -> list[CharVec]:
    return sorted({alpha.scaled(s) for s in units_mod(alpha.n)})


def in_T(alpha: CharVec) -> bool:
    """True when some orbit element has representative sum different from 2n."""
    return any(sum(b.a) != 2 * alpha.n for b in orbit(alpha))


# --- covering data ---------------------------------------------------------

@dataclass(frozen=True)
class ExponentCover:
    """Monomial map from the affine Fermat chart ``u^n + v^n + w^n + 1 = 0``.

    ``rows`` holds the exponents of ``(u, v, w)`` in ``y``, ``-x`` and ``-t``;
    ``model`` lists the right-hand terms ``(i, j, c)``, meaning ``c x^i t^j``,
    of the Delsarte model ``y^2 = x^3 + ...``.
    """

    key: tuple[int, str, int]
    rows: tuple[tuple[int, int, int], ...]
    model: tuple[tuple[int, int, int], ...]
    orbit_rep: tuple[int, int, int]
    smallest_q: int
    provenance: str

    @property
    def m(self) -> int:
        return self.key[0]

    @property
    def n(self) -> int:
        return self.key[2]

    def weierstrass(self) -> WeierstrassModel:
        a = {2: [0], 4: [0], 6: [0]}
        for i, j, c in self.model:
            if i not in (0, 1, 2):
                raise DelsarteError("model term must have x-degree at most 2")
            coeffs = a[6 - 2 * i]
            coeffs.extend([0] * (j + 1 - len(coeffs)))
            coeffs[j] += c
        return WeierstrassModel(a2=Poly(a[2]), a4=Poly(a[4]), a6=Poly(a[6]), name=self.label())

    def label(self) -> str:
        m, lam, n = self.key
        return f"m={m} lambda={lam} n={n}"

    def describe(self) -> str:
        names = ("y", "-x", "-t")
        mono = []
        for name, row in zip(names, self.rows):
            mono.append(f"{name} = " + " ".join(f"{v}^{e}" for v, e in zip("uvw", row) if e))
        return f"{self.label()}: {'; '.join(mono)}  [{self.provenance}]"


def _cover(m, lam, n, rows, model, rep, q, prov) -> ExponentCover:
    return ExponentCover((m, lam, n), tuple(map(tuple, rows)), tuple(model), rep, q, prov)


# Six Delsarte models and their Fermat covers; model terms are (x-degree, t-degree, coeff)
COVERS: dict[tuple[int, str, int], ExponentCover] = {
    c.key: c
    for c in [
        _cover(4, "0", 8, [(4, 14, -21), (0, 12, -14), (0, 4, -6)],
               [(2, 1, 1), (0, 7, 1)], (4, 2, 1), 17,
               "y^2 = x^3 + t x^2 + t^7, non-unimodular m=4 family at lambda=0"),
        _cover(8, "0", 16, [(8, 7, -21), (0, 10, -14), (0, 2, -6)],
               [(1, 2, 1), (0, 7, 1)], (8, 5, 1), 17,
               "y^2 = x^3 + t^2 x + t^7, m=8 family at lambda=0"),
        _cover(8, "sqrt3", 24, [(12, 0, 9), (0, 8, 6), (0, 0, 6)],
               [(0, 3, 1), (0, 7, 1)], (12, 8, 3), 73,
               "y^2 = x^3 + t^3 + t^7, isotrivial j=0 model of the m=8 member at lambda^2=3"),
        _cover(16, "0", 32, [(16, 11, -33), (0, 18, -22), (0, 2, -6)],
               [(1, 2, 1), (0, 11, 1)], (16, 9, 5), 97,
               "y^2 = x^3 + t^2 x + t^11, m=16 family at lambda=0"),
        _cover(16, "-2", 16, [(8, 22, -33), (0, 20, -22), (0, 4, -6)],
               [(2, 1, 1), (0, 11, 1)], (8, 2, 5), 17,
               "y^2 = x^3 + t x^2 + t^11, m=16 member at lambda=-2 after translating x by t"),
        _cover(16, "sqrt3", 48, [(24, 0, 9), (0, 16, 6), (0, 0, 6)],
               [(0, 3, 1), (0, 11, 1)], (24, 16, 3), 97,
               "y^2 = x^3 + t^3 + t^11, isotrivial j=0 model of the m=16 member at lambda^2=3"),
    ]
}


def get_cover(m: int, lam: str, n: int | None = None) -> ExponentCover:
    for key, c in COVERS.items():
        if key[0] == m and key[1] == str(lam) and (n is None or key[2] == n):
            return c
    raise DelsarteError(f"no Fermat cover for m={m}, lambda={lam}")


def check_cover(cover: ExponentCover) -> bool:
    """Substitute the monomials into the model and compare with the Fermat chart.

    ``y^2 - x^3 - sum(c x^i t^j)`` must equal ``c * M * (u^n + v^n + w^n + 1)``
    for a single Laurent monomial ``M`` and constant ``c``.
    """
    n = cover.n
    ey, ex, et = (np.array(r) for r in cover.rows)
    # each term: (sign, exponent vector); x = -X, t = -T with X, T monomials
    terms = [(1, 2 * ey), (-((-1) ** 3), 3 * ex)]
    for i, j, c in cover.model:
        terms.append((-c * (-1) ** (i + j), i * ex + j * et))
    base = np.minimum.reduce([e for _, e in terms])
    shifted = sorted((tuple(int(v) for v in e - base), s) for s, e in terms)
    want = sorted([(0, 0, 0), (n, 0, 0), (0, n, 0), (0, 0, n)])
    if [e for e, _ in shifted] != want:
        return False
    return len({s for _, s in shifted}) == 1


@lru_cache(maxsize=None)
def covering_group(cover: ExponentCover) -> tuple[tuple[int, int, int], ...]:
    """Elements of mu_n^3 fixing y, x and t, as exponent triples."""
    n = cover.n
    g = np.array(list(itertools.product(range(n), repeat=3)), dtype=np.int64)
    M = np.array(cover.rows, dtype=np.int64)
    keep = np.all((g @ M.T) % n == 0, axis=1)
    return tuple(tuple(int(x) for x in row) for row in g[keep])


def _group_generators(elems, n: int) -> list[tuple[int, int, int]]:
    """Greedy generating set of a subgroup of (Z/n)^3."""
    span = {(0, 0, 0)}
    gens = []
    for g in elems:
        if g in span:
            continue
        gens.append(g)
        new = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for s in frontier:
                for h in gens:
                    e = tuple((a + b) % n for a, b in zip(s, h))
                    if e not in new:
                        new.add(e)
                        nxt.append(e)
            frontier = nxt
        span = new
    return gens


def invariant_chars(cover: ExponentCover) -> list[CharVec]:
    """Characters in the transcendental set fixed by the covering group."""
    n = cover.n
    gens = _group_generators(covering_group(cover), n)
    out = []
    for alpha in char_group(n):
        a = alpha.triple
        if all(sum(x * y for x, y in zip(a, g)) % n == 0 for g in gens) and in_T(alpha):
            out.append(alpha)
    return sorted(out)


# --- Jacobi sums -----------------------------------------------------------

def _check_field(F: Fq, n: int) -> None:
    if (F.q - 1) % n:
        raise DelsarteError(f"q = {F.q} is not 1 mod {n}")
    if n % F.p == 0:
        raise DelsarteError(f"characteristic {F.p} divides {n}")


def jacobi_histogram(F: Fq, n: int, threads: int = 1, backend: str | None = None) -> np.ndarray:
    """Counts ``H[l1, l2, l3]`` of solutions of ``v1 + v2 + v3 = -1`` by logs mod n."""
    _check_field(F, n)
    logmod = F.log_table % n
    return kernels.jacobi_histogram(
        n, F.add_table, F.neg_table, logmod, F.neg(1), threads=threads, backend=backend
    )


def jacobi_from_histogram(H: np.ndarray, alpha: CharVec) -> CycInt:
    n = alpha.n
    a1, a2, a3 = alpha.triple
    l = np.arange(n)
    e = (a1 * l[:, None, None] + a2 * l[None, :, None] + a3 * l[None, None, :]) % n
    counts = np.zeros(n, dtype=np.int64)
    np.add.at(counts, e.ravel(), H.ravel())
    return CycInt.from_exponent_counts(n, counts.tolist())


def jacobi_sum(F: Fq, alpha: CharVec, H: np.ndarray | None = None) -> CycInt:
    """Jacobi sum of ``alpha`` as an exact cyclotomic integer."""
    if H is None:
        H = jacobi_histogram(F, alpha.n)
    return jacobi_from_histogram(H, alpha)


def jacobi_sum_naive(F: Fq, alpha: CharVec) -> CycInt:
    """Direct double loop; reference for the histogram route."""
    n = alpha.n
    _check_field(F, n)
    a1, a2, a3 = alpha.triple
    counts = [0] * n
    m1 = F.neg(1)
    for v1 in range(1, F.q):
        for v2 in range(1, F.q):
            v3 = F.sub(F.sub(m1, v1), v2)
            if v3 == 0:
                continue
            counts[(a1 * F.dlog(v1) + a2 * F.dlog(v2) + a3 * F.dlog(v3)) % n] += 1
    return CycInt.from_exponent_counts(n, counts)


def orbit_sum(F: Fq, chars, H: np.ndarray | None = None) -> int:
    chars = list(chars)
    if not chars:
        return 0
    if H is None:
        H = jacobi_histogram(F, chars[0].n)
    total = CycInt.from_int(chars[0].n, 0)
    for c in chars:
        total = total + jacobi_from_histogram(H, c)
    if not total.is_rational():
        raise DelsarteError("sum of Jacobi sums over a Galois-stable set is not rational")
    return total.to_int()


# --- point counts --------------------------------------------------------------

def _fermat_guard(F: Fq) -> None:
    if F.q > MAX_FERMAT_Q:
        raise DelsarteError(f"brute-force Fermat count limited to q <= {MAX_FERMAT_Q}")


def fermat_count(n: int, F: Fq, threads: int = 1, backend: str | None = None) -> int:
    """Projective F_q-points of ``x0^n + x1^n + x2^n + x3^n = 0``."""
    _fermat_guard(F)
    pown = np.array([F.pow(x, n) for x in range(F.q)], dtype=np.int32)
    return kernels.fermat_projective_count(F.add_table, pown, threads=threads, backend=backend)


def weil_prediction(n: int, F: Fq, threads: int = 1) -> int:
    """``1 + q + q^2 + sum of Jacobi sums over all characters``."""
    H = jacobi_histogram(F, n, threads=threads)
    return 1 + F.q + F.q**2 + orbit_sum(F, char_group(n), H)


def weil_check(n: int, F: Fq, threads: int = 1) -> bool:
    _check_field(F, n)
    return fermat_count(n, F, threads=threads) == weil_prediction(n, F, threads=threads)


def _reduce_poly(f: Poly, F: Fq) -> list[int]:
    out = []
    for c in f.coeffs:
        if isinstance(c, QuadElem):
            raise DelsarteError("cannot reduce quadratic-field coefficients modulo p")
        out.append(F.from_rational(Fraction(c)))
    return out


def _eval(cs: list[int], x: int, F: Fq) -> int:
    acc = 0
    for c in reversed(cs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def fiber_rows(W: WeierstrassModel, F: Fq) -> np.ndarray:
    """Coefficient rows ``(a1, a2, a3, a4, a6)`` for t in F_q, then t = infinity."""
    polys = [_reduce_poly(a, F) for a in W.coeffs]
    polys_inf = [_reduce_poly(a, F) for a in W.at_infinity().coeffs]
    rows = [[_eval(p, t, F) for p in polys] for t in range(F.q)]
    rows.append([p[0] if p else 0 for p in polys_inf])
    return np.array(rows, dtype=np.int64)


def _reducible_correction(C: FiberConfiguration, q: int) -> int:
    extra = 0
    for f in C.fibers:
        if f.components > 1:
            if f.place != INF and f.degree != 1:
                raise DelsarteError(f"reducible fibre {f.kind} at a place of degree {f.degree}")
            extra += (f.components - 1) * q
    return extra


def surface_count(
    W: WeierstrassModel,
    C: FiberConfiguration | None,
    F: Fq,
    threads: int = 1,
    backend: str | None = None,
    hasse: bool = True,
) -> int:
    """F_q-points on the smooth elliptic surface.

    Sum over ``t`` in ``P^1(F_q)`` of the Weierstrass fibre count (with its
    point at infinity), plus ``(m_v - 1) q`` for every reducible fibre, whose
    components are assumed rational over F_q.
    """
    if F.p == 2:
        raise DelsarteError("point counts need odd characteristic")
    C = C if C is not None else fiber_configuration(W)
    rows = fiber_rows(W, F)
    affine = kernels.fiber_counts(
        rows, F.add_table, F.mul_table, F.sqrt_counts(), F.from_int(4),
        threads=threads, backend=backend,
    )
    if hasse:
        disc = _reduce_poly(c_invariants(W).disc, F)
        disc_inf = _reduce_poly(c_invariants(W.at_infinity()).disc, F)
        for t in range(F.q + 1):
            d = _eval(disc, t, F) if t < F.q else (disc_inf[0] if disc_inf else 0)
            if d and (int(affine[t]) - F.q) ** 2 > 4 * F.q:
                raise AssertionError(f"Hasse bound violated on the fibre at t={t}")
    return int(affine.sum()) + (F.q + 1) + _reducible_correction(C, F.q)


# --- zeta functions ------------------------------------------------------------

@dataclass(frozen=True)
class ZetaFactor:
    q: int
    n: int
    rho: int
    chars: tuple[CharVec, ...]
    roots: tuple[CycInt, ...]
    P: tuple[int, ...]

    @property
    def trace(self) -> int:
        """Trace of Frobenius on H^2: ``-`` the T-coefficient of P."""
        return -self.P[1]

    def predicted_count(self) -> int:
        return 1 + self.trace + self.q**2

    def degree(self) -> int:
        return len(self.P) - 1


def _poly_mul_cyc(a: list[CycInt], b: list[CycInt], n: int) -> list[CycInt]:
    zero = CycInt.from_int(n, 0)
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def zeta_factor(cover: ExponentCover, F: Fq, threads: int = 1) -> ZetaFactor:
    """``P(T) = (1 - qT)^rho * prod(1 - j(alpha) T)`` over the invariant characters."""
    n = cover.n
    _check_field(F, n)
    chars = tuple(invariant_chars(cover))
    H = jacobi_histogram(F, n, threads=threads)
    roots = tuple(jacobi_from_histogram(H, c) for c in chars)
    for r in roots:
        if r * r.complex_conjugate() != CycInt.from_int(n, F.q**2):
            raise AssertionError("Jacobi sum does not have absolute value q")
    rho = 22 - euler_phi(n)
    one = CycInt.from_int(n, 1)
    P = [one]
    for r in roots:
        P = _poly_mul_cyc(P, [one, -r], n)
    P = _poly_mul_cyc(P, [CycInt.from_int(n, c) for c in _binomial_factor(F.q, rho)], n)
    if not all(c.is_rational() for c in P):
        raise AssertionError("characteristic polynomial has non-rational coefficients")
    coeffs = tuple(c.to_int() for c in P)
    return ZetaFactor(F.q, n, rho, chars, roots, coeffs)


def _binomial_factor(q: int, k: int) -> list[int]:
    """Coefficients of ``(1 - qT)^k``."""
    return [math.comb(k, i) * (-q) ** i for i in range(k + 1)]


@dataclass(frozen=True)
class ZetaReport:
    cover: ExponentCover
    zeta: ZetaFactor
    count: int

    @property
    def ok(self) -> bool:
        return self.zeta.degree() == 22 and self.count == self.zeta.predicted_count()


def zeta_k3(cover: ExponentCover, F: Fq | None = None, threads: int = 1) -> ZetaReport:
    """Zeta factor of a covered K3 model, cross-checked against a point count."""
    F = F or Fq(cover.smallest_q)
    Z = zeta_factor(cover, F, threads=threads)
    if Z.degree() != 22:
        raise AssertionError(f"P(T) has degree {Z.degree()}, expected 22")
    W = cover.weierstrass()
    count = surface_count(W, None, F, threads=threads)
    return ZetaReport(cover, Z, count)


# --- reports ----------------------------------------------------------------------

WEIL_CASES = ((4, 5), (4, 13), (8, 17))


def orbit_table_report():
    from .replay import Report

    rep = Report("covering character orbits")
    for c in COVERS.values():
        rep.add(f"{c.label()} cover identity", True, check_cover(c))
        chars = invariant_chars(c)
        rep.add(f"{c.label()} invariant characters = orbit of {c.orbit_rep}",
                sorted(orbit(CharVec.from_triple(c.n, *c.orbit_rep))), chars)
        rep.add(f"{c.label()} |T^G| = phi(n)", euler_phi(c.n), len(chars))
        rep.add(f"{c.label()} orbit is transcendental", True, all(in_T(a) for a in chars))
    return rep


def weil_report(threads: int = 1):
    from .replay import Report

    rep = Report("Fermat point counts")
    for n, q in WEIL_CASES:
        F = Fq(q)
        H = jacobi_histogram(F, n, threads=threads)
        chars = char_group(n)
        rep.add(f"#S_{n}(F_{q}) = 1 + q + q^2 + sum j", fermat_count(n, F, threads=threads),
                1 + q + q * q + orbit_sum(F, chars, H))
        qq = CycInt.from_int(n, q * q)
        bad = [a for a in chars
               if jacobi_from_histogram(H, a) * jacobi_from_histogram(H, a).complex_conjugate() != qq]
        rep.add(f"|j|^2 = q^2 for all characters, n={n} q={q}", 0, len(bad))
    rep.add("#S_4(F_5)", 0, fermat_count(4, Fq(5), threads=threads))
    return rep


def lefschetz_report(threads: int = 1):
    from .replay import Report

    rep = Report("Lefschetz identities")
    for c in COVERS.values():
        r = zeta_k3(c, threads=threads)
        rep.add(f"{c.label()} q={r.zeta.q} point count", r.zeta.predicted_count(), r.count)
        rep.add(f"{c.label()} deg P", 22, r.zeta.degree())
    return rep
