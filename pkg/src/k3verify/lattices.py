"""Even integral lattices and their discriminant forms.

Lattices are built from expressions such as ``"U+A1^2+E8^2"`` or
``"U(2)+D4^3"``. Root lattices are negative definite; ``<k>`` is the rank-one
lattice of norm ``k``.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

Matrix = list[list[int]]

MAX_FORM_ORDER = 1 << 10


class LatticeError(ValueError):
    pass


# --- expression grammar ---------------------------------------------------

_TERM = re.compile(r"^(U\((-?\d+)\)|U|A(\d+)|D(\d+)|E(\d+)|<(-?\d+)>)(?:\^(\d+))?$")


def parse_expr(expr: str) -> list[tuple[str, int, int]]:
    """Parse into ``(kind, parameter, power)`` triples.

    ``kind`` is one of ``U``, ``A``, ``D``, ``E``, ``<>``; the parameter is the
    scaling of ``U``, the index of a root lattice or the norm of ``<k>``.
    """
    s = re.sub(r"\s+", "", expr)
    if not s:
        raise LatticeError("empty lattice expression")
    out = []
    for raw in s.split("+"):
        m = _TERM.match(raw)
        if not m:
            raise LatticeError(f"malformed lattice term {raw!r} in {expr!r}")
        power = int(m.group(7)) if m.group(7) else 1
        if power < 1:
            raise LatticeError(f"power must be positive in {raw!r}")
        if m.group(1) == "U":
            out.append(("U", 1, power))
        elif m.group(2) is not None:
            k = int(m.group(2))
            if k == 0:
                raise LatticeError("U(0) is degenerate")
            out.append(("U", k, power))
        elif m.group(3) is not None:
            i = int(m.group(3))
            if i < 1:
                raise LatticeError(f"A{i} needs index >= 1")
            out.append(("A", i, power))
        elif m.group(4) is not None:
            i = int(m.group(4))
            if i < 4:
                raise LatticeError(f"D{i} needs index >= 4")
            out.append(("D", i, power))
        elif m.group(5) is not None:
            i = int(m.group(5))
            if i not in (6, 7, 8):
                raise LatticeError(f"E{i} is not a root lattice (need 6, 7 or 8)")
            out.append(("E", i, power))
        else:
            k = int(m.group(6))
            if k == 0:
                raise LatticeError("<0> is degenerate")
            out.append(("<>", k, power))
    return out


def term_string(kind: str, k: int, power: int = 1) -> str:
    base = {"U": "U" if k == 1 else f"U({k})", "A": f"A{k}", "D": f"D{k}", "E": f"E{k}", "<>": f"<{k}>"}[kind]
    return base if power == 1 else f"{base}^{power}"


_KIND_ORDER = {"U": 0, "<>": 1, "A": 2, "D": 3, "E": 4}


def canonical_expr(expr: str) -> str:
    """Sorted expression with merged powers, e.g. ``E8^2+U+A1^2 -> U+A1^2+E8^2``."""
    counts: dict[tuple[str, int], int] = {}
    for kind, k, p in parse_expr(expr):
        counts[(kind, k)] = counts.get((kind, k), 0) + p
    keys = sorted(counts, key=lambda kk: (_KIND_ORDER[kk[0]], kk[1]))
    return "+".join(term_string(kind, k, counts[(kind, k)]) for kind, k in keys)


def _cartan(edges: Sequence[tuple[int, int]], n: int) -> Matrix:
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return g


def root_gram(kind: str, i: int) -> Matrix:
    """Negative-definite Gram matrix of A_i, D_i or E_i."""
    if kind == "A":
        return _cartan([(k, k + 1) for k in range(i - 1)], i)
    if kind == "D":
        edges = [(k, k + 1) for k in range(i - 2)] + [(i - 3, i - 1)]
        return _cartan(edges, i)
    if kind == "E":
        # chain of i-1 nodes with the extra node attached to the third
        edges = [(k, k + 1) for k in range(i - 2)] + [(2, i - 1)]
        return _cartan(edges, i)
    raise LatticeError(f"unknown root lattice type {kind}")


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(len(b) for b in blocks)
    g = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for r, row in enumerate(b):
            for c, x in enumerate(row):
                g[off + r][off + c] = x
        off += len(b)
    return g


# --- exact linear algebra ---------------------------------------------------

def det(g: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(g)
    if n == 0:
        return 1
    a = [row[:] for row in g]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_normal_form(g: Matrix) -> tuple[list[int], Matrix]:
    """Return invariant factors ``d_1 | d_2 | ...`` and unimodular ``V`` with ``U g V = diag(d)``."""
    n = len(g)
    a = [row[:] for row in g]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(i, j, c):  # col_i += c * col_j
        for r in range(n):
            a[r][i] += c * a[r][j]
            v[r][i] += c * v[r][j]

    def col_swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
            v[r][i], v[r][j] = v[r][j], v[r][i]

    def row_op(i, j, c):  # row_i += c * row_j
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]

    for k in range(n):
        while True:
            piv = [(abs(a[i][j]), i, j) for i in range(k, n) for j in range(k, n) if a[i][j]]
            if not piv:
                break
            _, pi, pj = min(piv)
            a[k], a[pi] = a[pi], a[k]
            col_swap(k, pj)
            p = a[k][k]
            done = True
            for i in range(k + 1, n):
                c = a[i][k] // p
                if c:
                    row_op(i, k, -c)
                if a[i][k]:
                    done = False
            for j in range(k + 1, n):
                c = a[k][j] // p
                if c:
                    col_op(j, k, -c)
                if a[k][j]:
                    done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(k + 1, n) for j in range(k + 1, n) if a[i][j] % p), None)
            if bad is None:
                break
            row_op(k, bad[0], 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
    d = [a[i][i] for i in range(n)]
    return d, v


def signature(g: Matrix) -> tuple[int, int]:
    """(n_plus, n_minus) by congruence diagonalisation over Q; zero directions are dropped."""
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    pos = neg = 0
    active = list(range(n))
    while active:
        k = next((i for i in active if a[i][i] != 0), None)
        if k is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # replace e_i by e_i + e_j; the new diagonal entry 2 a_ij + a_jj = 2 a_ij is nonzero
            for r in range(n):
                a[r][i] += a[r][j]
            for c in range(n):
                a[i][c] += a[j][c]
            k = i
        p = a[k][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(k)
        for i in active:
            c = a[i][k] / p
            if c:
                for j in range(n):
                    a[i][j] -= c * a[k][j]
                for j in range(n):
                    a[j][i] -= c * a[j][k]
    return pos, neg


def _hnf_rows(rows: Matrix) -> Matrix:
    """Row-style Hermite basis of the integer row span (nonzero rows only)."""
    a = [r[:] for r in rows]
    m = len(a[0]) if a else 0
    out: Matrix = []
    for col in range(m):
        while True:
            nz = [r for r in a if r[col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            rest = []
            for r in a:
                if r is piv:
                    continue
                c = r[col] // piv[col]
                if c:
                    r = [x - c * y for x, y in zip(r, piv)]
                rest.append(r)
            if all(r[col] == 0 for r in rest):
                if piv[col] < 0:
                    piv = [-x for x in piv]
                out.append(piv)
                a = rest
                break
            a = rest + [piv]
    return out


# --- lattices and discriminant forms --------------------------------------

@dataclass(frozen=True)
class Lattice:
    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    expr: str | None = None

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if any(len(row) != n for row in g):
            raise LatticeError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise LatticeError("Gram matrix must be symmetric")

    @classmethod
    def from_matrix(cls, g: Matrix, expr: str | None = None, labels=None) -> "Lattice":
        return cls(tuple(tuple(int(x) for x in row) for row in g), labels, expr)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return det([list(r) for r in self.gram])

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> tuple[int, int]:
        return signature([list(r) for r in self.gram])

    def direct_sum(self, other: "Lattice") -> "Lattice":
        expr = f"{self.expr}+{other.expr}" if self.expr and other.expr else None
        return Lattice.from_matrix(block_diag([[list(r) for r in self.gram], [list(r) for r in other.gram]]), expr)

    def __add__(self, other: "Lattice") -> "Lattice":
        return self.direct_sum(other)


def lattice_make(expr: str) -> Lattice:
    blocks: list[Matrix] = []
    labels: list[str] = []
    for kind, k, power in parse_expr(expr):
        if kind == "U":
            block = [[0, k], [k, 0]]
        elif kind == "<>":
            block = [[k]]
        else:
            block = root_gram(kind, k)
        for p in range(power):
            blocks.append(block)
            name = term_string(kind, k)
            labels.extend(f"{name}#{p}.{i}" for i in range(len(block)))
    return Lattice.from_matrix(block_diag(blocks), expr=expr, labels=tuple(labels))


def _mod2(x: Fraction) -> Fraction:
    return x - 2 * math.floor(x / 2)


def _mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class DiscriminantForm:
    """Finite quadratic form on ``A_L = L^dual / L``.

    Elements are coordinate tuples ``c`` with ``0 <= c_i < invariant_factors[i]``;
    ``gen_gram[i][j]`` is the rational pairing of the i-th and j-th generator lifts.
    """

    invariant_factors: tuple[int, ...]
    gen_gram: tuple[tuple[Fraction, ...], ...]
    generators: tuple[tuple[Fraction, ...], ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def length(self) -> int:
        return len(self.invariant_factors)

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def q(self, c: Sequence[int]) -> Fraction:
        """Quadratic value in Q/2Z, reduced into [0, 2)."""
        s = Fraction(0)
        g = self.gen_gram
        for i, ci in enumerate(c):
            if ci:
                s += ci * ci * g[i][i]
                for j in range(i + 1, len(c)):
                    if c[j]:
                        s += 2 * ci * c[j] * g[i][j]
        return _mod2(s)

    def b(self, c1: Sequence[int], c2: Sequence[int]) -> Fraction:
        """Bilinear value in Q/Z, reduced into [0, 1)."""
        s = Fraction(0)
        for i, x in enumerate(c1):
            if x:
                for j, y in enumerate(c2):
                    if y:
                        s += x * y * self.gen_gram[i][j]
        return _mod1(s)

    def add(self, c1, c2) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(c1, c2, self.invariant_factors))

    def scale(self, k: int, c) -> tuple[int, ...]:
        return tuple((k * x) % d for x, d in zip(c, self.invariant_factors))

    def element_order(self, c) -> int:
        o = 1
        for x, d in zip(c, self.invariant_factors):
            o = math.lcm(o, d // math.gcd(x, d))
        return o

    @cached_property
    def q_values(self) -> dict[tuple[int, ...], Fraction]:
        if self.order > MAX_FORM_ORDER:
            raise LatticeError(f"discriminant group of order {self.order} is too large to enumerate")
        return {c: self.q(c) for c in self.elements()}

    @cached_property
    def b_values(self) -> dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction]:
        els = list(self.q_values)
        return {(x, y): self.b(x, y) for x in els for y in els}

    def negated(self) -> "DiscriminantForm":
        return DiscriminantForm(
            self.invariant_factors,
            tuple(tuple(-x for x in row) for row in self.gen_gram),
            self.generators,
        )

    def is_p_elementary(self, p: int) -> bool:
        return all(d == p for d in self.invariant_factors)

    def lift(self, c: Sequence[int]) -> tuple[Fraction, ...]:
        """Rational coordinates (w.r.t. the lattice basis) of a lift of ``c``."""
        r = len(self.generators[0]) if self.generators else 0
        v = [Fraction(0)] * r
        for ci, gen in zip(c, self.generators):
            for k in range(r):
                v[k] += ci * gen[k]
        return tuple(v)


def discriminant_form(L: Lattice) -> DiscriminantForm:
    if L.det == 0:
        raise LatticeError("degenerate lattice has no finite discriminant group")
    d, v = smith_normal_form([list(r) for r in L.gram])
    n = L.rank
    gens = []
    factors = []
    for i, di in enumerate(d):
        if abs(di) > 1:
            factors.append(abs(di))
            gens.append(tuple(Fraction(v[r][i], di) for r in range(n)))
    g = L.gram
    gen_gram = tuple(
        tuple(sum(x * g[a][b] * y for a, x in enumerate(u) if x for b, y in enumerate(w) if y) for w in gens)
        for u in gens
    )
    return DiscriminantForm(tuple(factors), gen_gram, tuple(gens))


@dataclass(frozen=True)
class NikulinTriple:
    r: int
    l: int
    delta: int
    signature: tuple[int, int]

    def triple(self) -> tuple[int, int, int]:
        return (self.r, self.l, self.delta)


def delta_invariant(F: DiscriminantForm) -> int:
    """0 if every q-value is integral, 1 otherwise (2-elementary forms only)."""
    if not F.is_p_elementary(2) and F.order != 1:
        raise LatticeError("delta is only defined for 2-elementary lattices")
    return 0 if all(v.denominator == 1 for v in F.q_values.values()) else 1


def nikulin_triple(L: Lattice) -> NikulinTriple:
    if not L.is_even():
        raise LatticeError("nikulin_triple needs an even lattice")
    F = discriminant_form(L)
    return NikulinTriple(L.rank, F.length, delta_invariant(F), L.signature)


def is_p_elementary(L: Lattice, p: int) -> bool:
    return all(d == p for d in discriminant_form(L).invariant_factors)


def overlattice(L: Lattice, glue: Sequence[int]) -> Lattice:
    """Even overlattice generated by ``L`` and a lift of an isotropic order-2 element."""
    F = discriminant_form(L)
    glue = tuple(glue)
    if len(glue) != F.length:
        raise LatticeError("glue has the wrong number of coordinates")
    if not any(glue):
        return L
    if F.element_order(glue) != 2:
        raise LatticeError("glue element must have order 2")
    if F.q(glue) != 0:
        raise LatticeError(f"glue is not isotropic: q = {F.q(glue)} mod 2")
    x = F.lift(glue)
    n = L.rank
    den = math.lcm(*(c.denominator for c in x))
    rows = [[den * int(i == j) for j in range(n)] for i in range(n)]
    rows.append([int(c * den) for c in x])
    basis = _hnf_rows(rows)
    g = L.gram
    new = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s = sum(basis[i][a] * g[a][b] * basis[j][b] for a in range(n) for b in range(n))
            val = Fraction(s, den * den)
            if val.denominator != 1:
                raise LatticeError("overlattice is not integral")
            new[i][j] = int(val)
    return Lattice.from_matrix(new)


def isotropic_glues(L: Lattice) -> list[tuple[int, ...]]:
    """All order-2 elements of ``A_L`` with q = 0 mod 2."""
    F = discriminant_form(L)
    return [c for c, v in F.q_values.items() if any(c) and F.element_order(c) == 2 and v == 0]


def form_isomorphic(F1: DiscriminantForm, F2: DiscriminantForm, negate: bool = False) -> bool:
    """Whether a group isomorphism carries q1 to q2 (or to -q2 when ``negate``)."""
    if max(F1.order, F2.order) > 256:
        raise LatticeError("form_isomorphic supports groups of order <= 256")
    if sorted(F1.invariant_factors) != sorted(F2.invariant_factors):
        return False
    if F1.order == 1:
        return True
    target = F2.negated() if negate else F2
    q2 = target.q_values
    if sorted(F1.q_values.values()) != sorted(q2.values()):
        return False
    k = F1.length
    gens1 = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    qg = [F1.q(e) for e in gens1]
    bg = [[F1.b(gens1[i], gens1[j]) for j in range(k)] for i in range(k)]
    orders = F1.invariant_factors
    by_key: dict[tuple[int, Fraction], list[tuple[int, ...]]] = {}
    for c, v in q2.items():
        by_key.setdefault((target.element_order(c), v), []).append(c)
    zero = tuple(0 for _ in target.invariant_factors)

    def span_add(span: set, h) -> set:
        out = set(span)
        cur = h
        multiples = [zero]
        while cur != zero:
            multiples.append(cur)
            cur = target.add(cur, h)
        for s in span:
            for m in multiples:
                out.add(target.add(s, m))
        return out

    def search(i: int, images: list, span: set) -> bool:
        if i == k:
            return len(span) == F2.order
        for h in by_key.get((orders[i], qg[i]), []):
            if h in span:
                continue
            if any(target.b(images[j], h) != bg[j][i] for j in range(i)):
                continue
            new_span = span_add(span, h)
            if len(new_span) != len(span) * orders[i]:
                continue
            if search(i + 1, images + [h], new_span):
                return True
        return False

    return search(0, [], {zero})


def genus_equal(L1: Lattice, L2: Lattice, negate: bool = False) -> bool:
    """Rank, signature and discriminant form agree (signature flipped when ``negate``)."""
    if L1.rank != L2.rank:
        return False
    s2 = L2.signature[::-1] if negate else L2.signature
    if L1.signature != s2:
        return False
    return form_isomorphic(discriminant_form(L1), discriminant_form(L2), negate=negate)


def mirror_check(t_expr: str, ns_mirror: Lattice | str) -> bool:
    """Genus-level test of ``T = U + NS_mirror``; ``t_expr`` must show an explicit ``U``."""
    terms = parse_expr(t_expr)
    if not any(kind == "U" and k == 1 for kind, k, _ in terms):
        raise LatticeError(f"{t_expr!r} has no explicit U summand")
    T = lattice_make(t_expr)
    N = lattice_make(ns_mirror) if isinstance(ns_mirror, str) else ns_mirror
    return genus_equal(T, lattice_make("U") + N)
