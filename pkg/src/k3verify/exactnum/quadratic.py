"""Elements a + b*sqrt(d) of a real or imaginary quadratic field."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from ._util import is_squarefree


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


class QuadElem:
    """An element ``a + b*sqrt(d)`` with rational ``a``, ``b`` and square-free ``d``.

    Mixed arithmetic with ``int`` and ``Fraction`` is supported; mixing two
    different radicands raises ``ValueError``.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        d = int(d)
        if d in (0, 1) or not is_squarefree(d):
            raise ValueError(f"radicand must be square-free and not 0 or 1, got {d}")
        object.__setattr__(self, "a", _rat(a))
        object.__setattr__(self, "b", _rat(b))
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElem is immutable")

    @classmethod
    def sqrt(cls, d: int) -> "QuadElem":
        return cls(0, 1, d)

    def _coerce(self, other) -> "QuadElem | None":
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise ValueError(f"mixed radicands {self.d} and {other.d}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return QuadElem(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElem(
            self.a * o.a + self.d * self.b * o.b,
            self.a * o.b + self.b * o.a,
            self.d,
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.a, -self.b, self.d)

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        return QuadElem(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadElem(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadElem):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d) or (
                self.b == 0 and other.b == 0 and self.a == other.a
            )
        if isinstance(other, (int, Fraction, Rational)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"QuadElem({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = f"sqrt({self.d})"
        b = "" if self.b == 1 else ("-" if self.b == -1 else f"{self.b}*")
        if self.a == 0:
            return f"{b}{rad}"
        sign = "+" if self.b > 0 else "-"
        babs = abs(self.b)
        bs = "" if babs == 1 else f"{babs}*"
        return f"{self.a}{sign}{bs}{rad}"
