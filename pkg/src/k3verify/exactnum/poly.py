"""Dense univariate polynomials in ``t`` over Q or a quadratic field Q(sqrt d)."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .quadratic import QuadElem

NEG_INF = -math.inf


def _norm_coeff(c):
    if isinstance(c, QuadElem):
        return c.a if c.b == 0 else c
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient {c!r}")


class Poly:
    """Polynomial with coefficients listed from the constant term upwards.

    Coefficients are ``Fraction`` or ``QuadElem``; trailing zeros are stripped
    so the zero polynomial has no coefficients and degree ``-inf``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_norm_coeff(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def t(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, c, k: int) -> "Poly":
        return cls([0] * k + [c])

    # --- basic structure -------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def radicand(self) -> int | None:
        for c in self.coeffs:
            if isinstance(c, QuadElem):
                return c.d
        return None

    # --- arithmetic ------------------------------------------------------
    @staticmethod
    def _lift(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, QuadElem)):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        n = max(len(a), len(b))
        return Poly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(o.coeffs) - 1
        inv_lc = 1 / o.lc
        if len(rem) - 1 < db:
            return Poly(), self
        quo = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv_lc
            quo[k] = c
            if c:
                for j, y in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * y
        return Poly(quo), Poly(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    def scale(self, c) -> "Poly":
        return Poly(c * x for x in self.coeffs)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose_power(self, k: int) -> "Poly":
        """Return ``f(t**k)``."""
        out = [Fraction(0)] * (k * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[i * k] = c
        return Poly(out)

    def reversed_to(self, n: int) -> "Poly":
        """Return ``s**n * f(1/s)``; needs ``n >= degree``."""
        if self.is_zero():
            return self
        if n < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        cs = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Poly(reversed(cs))

    # --- comparison / display -------------------------------------------
    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(map(str, self.coeffs))})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if isinstance(c, QuadElem):
                cs = f"({c})"
                neg = False
            else:
                neg = c < 0
                cs = str(abs(c))
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            terms.append(("-" if neg else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; ``gcd(0, 0)`` is the zero polynomial."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_decomposition(f: Poly) -> tuple[object, list[tuple[Poly, int]]]:
    """Yun's algorithm: ``f = c * prod(a_i ** i)`` with monic, squarefree, coprime ``a_i``.

    Returns the constant ``c`` and the non-constant factors with multiplicities.
    """
    if f.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    c = f.lc
    f = f.monic()
    if f.is_constant():
        return c, []
    df = f.derivative()
    a = poly_gcd(f, df)
    b = f.exact_div(a)
    d = df.exact_div(a) - b.derivative()
    out = []
    i = 1
    while not b.is_constant():
        ai = poly_gcd(b, d)
        b = b.exact_div(ai)
        d = d.exact_div(ai) - b.derivative()
        if not ai.is_constant():
            out.append((ai, i))
        i += 1
    return c, out


def squarefree_part(f: Poly) -> Poly:
    _, parts = squarefree_decomposition(f)
    out = Poly([1])
    for p, _ in parts:
        out = out * p
    return out


def valuation(f: Poly, p: Poly) -> float:
    """Exponent of ``p`` in ``f`` (``inf`` for ``f == 0``)."""
    if f.is_zero():
        return math.inf
    if p.is_constant():
        raise ValueError("valuation at a constant")
    v = 0
    while True:
        q, r = divmod(f, p)
        if not r.is_zero():
            return v
        f, v = q, v + 1


def coprime_refinement(fs: Sequence[Poly]) -> tuple[list[Poly], list[list[int]]]:
    """Gcd-free basis of nonzero polynomials.

    Returns monic, squarefree, pairwise coprime ``basis`` and an exponent table
    with ``fs[j] == const * prod(basis[i] ** exps[j][i])``.
    """
    if not fs:
        raise ValueError("coprime_refinement of an empty list")
    if any(f.is_zero() for f in fs):
        raise ValueError("coprime_refinement needs nonzero polynomials")
    # start from the Yun factors so different multiplicities are already split
    work = [a for f in fs for a, _ in squarefree_decomposition(f)[1]]
    work = [w for w in work if not w.is_constant()]
    changed = True
    while changed:
        changed = False
        for i in range(len(work)):
            for j in range(i + 1, len(work)):
                g = poly_gcd(work[i], work[j])
                if g.is_constant():
                    continue
                a = work[i].exact_div(g)
                b = work[j].exact_div(g)
                rest = [w for k, w in enumerate(work) if k not in (i, j)]
                work = rest + [p.monic() for p in (a, b, g) if not p.is_constant()]
                changed = True
                break
            if changed:
                break
    basis: list[Poly] = []
    for w in work:
        w = w.monic()
        if w not in basis:
            basis.append(w)
    basis.sort(key=lambda p: (p.degree, [str(c) for c in p.coeffs]))
    exps = []
    for f in fs:
        row = []
        rem = f
        for b in basis:
            v = valuation(rem, b)
            row.append(v)
            rem = rem.exact_div(b**v) if v else rem
        if not rem.is_constant():
            raise AssertionError("refinement failed to reconstruct input")
        exps.append(row)
    return basis, exps
