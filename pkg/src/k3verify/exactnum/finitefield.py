"""Finite fields F_{p^r} with table-driven arithmetic.

Elements are integers ``0 <= x < q``; for ``r > 1`` the base-``p`` digits of
``x`` are the coefficients of the residue polynomial (constant digit first).
"""
from __future__ import annotations

import itertools
import math
from functools import cached_property

import numpy as np

from ._util import factorize, is_prime

MAX_TABLE_Q = 1 << 16


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    dm = len(m) - 1
    inv = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        while a and a[-1] == 0:
            a.pop()
        if len(a) - 1 < dm:
            break
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for j, y in enumerate(m):
            a[shift + j] = (a[shift + j] - c * y) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = [x % p for x in a]
    b = [x % p for x in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _x_pow_mod(e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = [0, 1]
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible_mod_p(m: list[int], p: int) -> bool:
    """No factor of degree <= deg/2: gcd(x^(p^i) - x, m) == 1 for all such i."""
    r = len(m) - 1
    if r < 1:
        return False
    if r == 1:
        return True
    for i in range(1, r // 2 + 1):
        h = _x_pow_mod(p**i, m, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        g = _pgcd(m, h, p)
        if len(g) > 1:
            return False
    return True


def lowest_irreducible(p: int, r: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree r over F_p."""
    if r == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=r):
        # tail lists coefficients from x^(r-1) down to x^0
        m = list(reversed(tail)) + [1]
        if m[0] == 0:
            continue
        if is_irreducible_mod_p(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")


class Fq:
    """The field with ``q = p**r`` elements and a fixed multiplicative generator."""

    def __init__(self, p: int, r: int = 1, generator: int | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if r < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.r = r
        self.q = p**r
        if self.q > MAX_TABLE_Q:
            raise ValueError(f"field size {self.q} exceeds table limit {MAX_TABLE_Q}")
        self.modulus = lowest_irreducible(p, r)
        self._primes = list(factorize(self.q - 1)) if self.q > 2 else []
        if generator is None:
            generator = next(g for g in range(1, self.q) if self._has_full_order(g))
        elif not self._has_full_order(generator):
            raise ValueError(f"{generator} does not generate F_{self.q}*")
        self.generator = generator
        exp = [1] * (self.q - 1)
        for k in range(1, self.q - 1):
            exp[k] = self._slow_mul(exp[k - 1], generator)
        self._exp = exp
        log = [-1] * self.q
        for k, x in enumerate(exp):
            log[x] = k
        self._log = log

    # --- slow path used only while building tables ----------------------
    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.r):
            x, d = divmod(x, self.p)
            out.append(d)
        return out

    def _from_digits(self, ds) -> int:
        x = 0
        for d in reversed(list(ds)):
            x = x * self.p + d
        return x

    def _slow_mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        prod = _pmod(_pmul(self._digits(a), self._digits(b), self.p), list(self.modulus), self.p)
        return self._from_digits(prod + [0] * (self.r - len(prod)))

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _has_full_order(self, g: int) -> bool:
        if g == 0:
            return False
        if self.q == 2:
            return g == 1
        return all(self._slow_pow(g, (self.q - 1) // l) != 1 for l in self._primes)

    # --- field operations ------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        return self._from_digits((x + y) % self.p for x, y in zip(self._digits(a), self._digits(b)))

    def neg(self, a: int) -> int:
        if self.r == 1:
            return (-a) % self.p
        return self._from_digits((-x) % self.p for x in self._digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of 0")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def gen_pow(self, k: int) -> int:
        return self._exp[k % (self.q - 1)]

    def dlog(self, x: int) -> int:
        """Exponent ``k`` in ``[0, q-1)`` with ``generator**k == x``."""
        if x == 0 or not 0 < x < self.q:
            raise ValueError("discrete log needs a nonzero field element")
        return self._log[x]

    def from_int(self, k: int) -> int:
        """Image of an integer under Z -> F_p -> F_q."""
        return k % self.p

    def from_rational(self, c) -> int:
        num, den = c.numerator, c.denominator
        if den % self.p == 0:
            raise ZeroDivisionError(f"denominator {den} vanishes modulo {self.p}")
        return self.mul(self.from_int(num), self.inv(self.from_int(den)))

    def elements(self) -> range:
        return range(self.q)

    def with_generator(self, g: int) -> "Fq":
        return Fq(self.p, self.r, generator=g)

    def generators(self) -> list[int]:
        if self.q == 2:
            return [1]
        return sorted(self._exp[k] for k in range(1, self.q - 1) if math.gcd(k, self.q - 1) == 1)

    # --- tables for kernels ----------------------------------------------
    @cached_property
    def add_table(self) -> np.ndarray:
        idx = np.arange(self.q, dtype=np.int64)
        if self.r == 1:
            return ((idx[:, None] + idx[None, :]) % self.p).astype(np.int32)
        digits = np.stack([(idx // self.p**i) % self.p for i in range(self.r)], axis=1)
        out = np.zeros((self.q, self.q), dtype=np.int64)
        for i in range(self.r):
            out += ((digits[:, None, i] + digits[None, :, i]) % self.p) * self.p**i
        return out.astype(np.int32)

    @cached_property
    def mul_table(self) -> np.ndarray:
        log = np.array(self._log, dtype=np.int64)
        exp = np.array(self._exp, dtype=np.int64)
        s = (log[:, None] + log[None, :]) % (self.q - 1)
        out = exp[s]
        out[0, :] = 0
        out[:, 0] = 0
        return out.astype(np.int32)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.neg(a) for a in range(self.q)], dtype=np.int32)

    @cached_property
    def log_table(self) -> np.ndarray:
        return np.array(self._log, dtype=np.int64)

    def sqrt_counts(self) -> np.ndarray:
        """Number of square roots of every element."""
        counts = np.zeros(self.q, dtype=np.int64)
        for y in range(self.q):
            counts[self.mul(y, y)] += 1
        return counts

    def __repr__(self):
        return f"Fq(p={self.p}, r={self.r}, generator={self.generator})"
