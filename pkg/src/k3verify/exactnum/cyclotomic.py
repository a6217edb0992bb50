"""Exact arithmetic in Z[zeta_n] using the power basis modulo the cyclotomic polynomial."""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

from ._util import euler_phi


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, constant term first."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _int_exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _int_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    assert b[-1] in (1, -1)
    q = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] * b[-1]
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] -= c * y
    assert not any(a), "inexact division of integer polynomials"
    return q


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Coordinates of zeta_n**e for e = 0..n-1."""
    phi = euler_phi(n)
    cyc = cyclotomic_poly(n)
    rows = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(n):
        rows.append(tuple(cur))
        # multiply by zeta and reduce with the monic relation
        top = cur[-1]
        nxt = [0] + cur[:-1]
        if top:
            for i in range(phi):
                nxt[i] -= top * cyc[i]
        cur = nxt
    return tuple(rows)


class CycInt:
    """Element of Z[zeta_n] stored by power-basis coordinates of length phi(n)."""

    __slots__ = ("n", "coords")

    def __init__(self, n: int, coords: Sequence[int]):
        phi = euler_phi(n)
        cs = [int(c) for c in coords]
        if len(cs) > phi:
            cs = list(_reduce(n, cs))
        cs += [0] * (phi - len(cs))
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coords", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("CycInt is immutable")

    @classmethod
    def zeta(cls, n: int, e: int = 1) -> "CycInt":
        return cls(n, _power_table(n)[e % n])

    @classmethod
    def from_int(cls, n: int, k: int) -> "CycInt":
        return cls(n, [k])

    @classmethod
    def from_exponent_counts(cls, n: int, counts: Sequence[int]) -> "CycInt":
        """Return sum(counts[e] * zeta_n**e)."""
        table = _power_table(n)
        acc = [0] * euler_phi(n)
        for e, c in enumerate(counts):
            if c:
                row = table[e % n]
                for i, x in enumerate(row):
                    if x:
                        acc[i] += c * x
        return cls(n, acc)

    def _check(self, other: "CycInt"):
        if other.n != self.n:
            raise ValueError(f"mixed cyclotomic orders {self.n} and {other.n}")

    def __add__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(self.n, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        self._check(other)
        return CycInt(self.n, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.n, [-a for a in self.coords])

    def __sub__(self, other):
        if isinstance(other, int):
            other = CycInt.from_int(self.n, other)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.n, [a * other for a in self.coords])
        if not isinstance(other, CycInt):
            return NotImplemented
        self._check(other)
        prod = [0] * (2 * len(self.coords) - 1)
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        prod[i + j] += a * b
        return CycInt(self.n, _reduce(self.n, prod))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = CycInt.from_int(self.n, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def conj(self, s: int) -> "CycInt":
        """Galois automorphism zeta -> zeta**s."""
        if math.gcd(s, self.n) != 1:
            raise ValueError(f"{s} is not a unit modulo {self.n}")
        table = _power_table(self.n)
        acc = [0] * len(self.coords)
        for i, c in enumerate(self.coords):
            if c:
                for k, x in enumerate(table[(i * s) % self.n]):
                    if x:
                        acc[k] += c * x
        return CycInt(self.n, acc)

    def complex_conjugate(self) -> "CycInt":
        return self.conj(self.n - 1)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError("cyclotomic integer is not rational")
        return self.coords[0]

    def to_complex(self) -> complex:
        z = complex(math.cos(2 * math.pi / self.n), math.sin(2 * math.pi / self.n))
        return sum(c * z**i for i, c in enumerate(self.coords))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.n == other.n and self.coords == other.coords

    def __hash__(self):
        return hash((self.n, self.coords))

    def __repr__(self):
        return f"CycInt({self.n}, {list(self.coords)})"


def _reduce(n: int, cs: Sequence[int]) -> list[int]:
    phi = euler_phi(n)
    cyc = cyclotomic_poly(n)
    cs = list(cs)
    for k in range(len(cs) - 1, phi - 1, -1):
        c = cs[k]
        if c:
            base = k - phi
            for i in range(phi + 1):
                cs[base + i] -= c * cyc[i]
    return cs[:phi] + [0] * max(0, phi - len(cs))
