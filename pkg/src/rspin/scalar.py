"""Exact scalars a + b*s over the rationals, with s^2 = -r.

Every number appearing in the core computation lives in the quadratic
extension Q(sqrt(-r)): odd-degree tau coefficients carry odd powers of s,
and the change to descendant variables divides them away again.  There is
no floating point anywhere; equality means exact equality of reduced
fractions.

s denotes a different number for every r, so each value carries its r and
mixing values from different r contexts raises instead of coercing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextError

RationalLike = int | Fraction


def _frac(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class QScalar:
    """Immutable element a + b*s of Q(s), s^2 = -r.

    Fractions are always stored reduced with positive denominator, so equal
    values have identical representations.
    """

    r: int
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if not isinstance(self.r, int) or self.r < 2:
            raise ValueError(f"r must be an integer >= 2, got {self.r!r}")

    @classmethod
    def of(cls, r: int, a: RationalLike = 0, b: RationalLike = 0) -> QScalar:
        return cls(r, _frac(a), _frac(b))

    @classmethod
    def root(cls, r: int) -> QScalar:
        """The generator s = sqrt(-r) itself."""
        return cls(r, Fraction(0), Fraction(1))

    @property
    def is_zero(self) -> bool:
        return not self.a and not self.b

    @property
    def is_rational(self) -> bool:
        """True iff the s-component vanishes."""
        return not self.b

    def _coerce(self, other) -> "QScalar | None":
        if isinstance(other, QScalar):
            if other.r != self.r:
                raise ContextError(
                    f"cannot combine scalars over r={self.r} and r={other.r}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return QScalar(self.r, _frac(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QScalar(self.r, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self) -> QScalar:
        return QScalar(self.r, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QScalar(self.r, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # (a1 + b1 s)(a2 + b2 s) = (a1 a2 - r b1 b2) + (a1 b2 + a2 b1) s
        return QScalar(
            self.r,
            self.a * o.a - self.r * self.b * o.b,
            self.a * o.b + o.a * self.b,
        )

    __rmul__ = __mul__

    def inv(self) -> QScalar:
        """Multiplicative inverse (a - b s) / (a^2 + r b^2)."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero scalar")
        den = self.a * self.a + self.r * self.b * self.b
        return QScalar(self.r, self.a / den, -self.b / den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, n: int) -> QScalar:
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        result = QScalar(self.r, Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.a:
            parts.append(str(self.a))
        if self.b:
            if self.b == 1:
                term = "s"
            elif self.b == -1:
                term = "-s"
            else:
                term = f"{self.b}*s"
            if parts and not term.startswith("-"):
                parts.append(f"+ {term}")
            elif parts:
                parts.append(f"- {term[1:]}")
            else:
                parts.append(term)
        return " ".join(parts)
