"""Sparse polynomials in the time variables T_n with a Laurent slot for the
genus parameter.

A monomial stores an integer exponent of the genus parameter ("lam") plus a
sorted tuple of (index, exponent) pairs for the T variables.  Indices
divisible by r never occur: the reduced hierarchy carries no such times, and
constructors reject them.  The integer weight sum(n * e_n) drives the
grading; the degree-d slice of a polynomial is its weight-d*(r+1) part.

Coefficients are QScalar values over the same r as the polynomial.  Zero
coefficients are never stored, monomial tuples are always sorted, and the
canonical term order (weight, lam exponent, exponent sequence) makes the
representation of equal polynomials identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .errors import ContextError, InvalidIndexError
from .scalar import QScalar

CoeffLike = QScalar | int | Fraction


def check_index(r: int, n: int) -> None:
    """Reject variable indices outside the reduced hierarchy."""
    if not isinstance(n, int) or n < 1:
        raise InvalidIndexError(f"variable index must be a positive integer, got {n!r}")
    if n % r == 0:
        raise InvalidIndexError(f"variable index {n} is divisible by r={r}")


@dataclass(frozen=True)
class TMonomial:
    """Product lam^lambda_exp * prod T_n^e_n, stored canonically."""

    lambda_exp: int
    exps: tuple[tuple[int, int], ...]

    @staticmethod
    def make(lambda_exp: int = 0, exps: Mapping[int, int] | Iterable[tuple[int, int]] = ()) -> TMonomial:
        pairs = dict(exps)
        for n, e in pairs.items():
            if e < 0:
                raise ValueError(f"negative exponent {e} for T_{n}")
        items = tuple(sorted((n, e) for n, e in pairs.items() if e))
        return TMonomial(lambda_exp, items)

    @property
    def weight(self) -> int:
        return sum(n * e for n, e in self.exps)

    @property
    def is_constant(self) -> bool:
        return not self.exps

    def sort_key(self):
        return (self.weight, self.lambda_exp, self.exps)

    def times(self, other: TMonomial) -> TMonomial:
        if not other.exps:
            return TMonomial(self.lambda_exp + other.lambda_exp, self.exps)
        merged = dict(self.exps)
        for n, e in other.exps:
            merged[n] = merged.get(n, 0) + e
        return TMonomial(self.lambda_exp + other.lambda_exp, tuple(sorted(merged.items())))

    def times_var(self, n: int, k: int) -> TMonomial:
        merged = dict(self.exps)
        merged[n] = merged.get(n, 0) + k
        return TMonomial(self.lambda_exp, tuple(sorted(merged.items())))

    def shift_lambda(self, k: int) -> TMonomial:
        if not k:
            return self
        return TMonomial(self.lambda_exp + k, self.exps)

    def __str__(self) -> str:
        parts = [f"T{n}" if e == 1 else f"T{n}^{e}" for n, e in self.exps]
        if self.lambda_exp:
            parts.append(f"lam^{self.lambda_exp}")
        return "*".join(parts) if parts else "1"


ONE_MONOMIAL = TMonomial(0, ())


class TPolynomial:
    """Finite QScalar-linear combination of TMonomials over a fixed r."""

    __slots__ = ("r", "terms")

    def __init__(self, r: int, terms: Mapping[TMonomial, QScalar] | None = None):
        if not isinstance(r, int) or r < 2:
            raise ValueError(f"r must be an integer >= 2, got {r!r}")
        clean: dict[TMonomial, QScalar] = {}
        for mono, coeff in (terms or {}).items():
            for n, _ in mono.exps:
                check_index(r, n)
            if not isinstance(coeff, QScalar):
                coeff = QScalar.of(r, coeff)
            if coeff.r != r:
                raise ContextError(f"coefficient over r={coeff.r} in polynomial over r={r}")
            if coeff:
                clean[mono] = coeff
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("TPolynomial is immutable")

    @classmethod
    def _raw(cls, r: int, terms: dict[TMonomial, QScalar]) -> TPolynomial:
        # Internal fast path: caller guarantees canonical, validated terms.
        poly = cls.__new__(cls)
        object.__setattr__(poly, "r", r)
        object.__setattr__(poly, "terms", terms)
        return poly

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, r: int) -> TPolynomial:
        return cls._raw(r, {})

    @classmethod
    def one(cls, r: int) -> TPolynomial:
        return cls._raw(r, {ONE_MONOMIAL: QScalar.of(r, 1)})

    @classmethod
    def const(cls, r: int, c: CoeffLike) -> TPolynomial:
        if not isinstance(c, QScalar):
            c = QScalar.of(r, c)
        return cls(r, {ONE_MONOMIAL: c})

    @classmethod
    def var(cls, r: int, n: int) -> TPolynomial:
        check_index(r, n)
        return cls._raw(r, {TMonomial(0, ((n, 1),)): QScalar.of(r, 1)})

    @classmethod
    def monomial(
        cls,
        r: int,
        coeff: CoeffLike,
        lambda_exp: int = 0,
        exps: Mapping[int, int] | Iterable[tuple[int, int]] = (),
    ) -> TPolynomial:
        return cls(r, {TMonomial.make(lambda_exp, exps): coeff if isinstance(coeff, QScalar) else QScalar.of(r, coeff)})

    @classmethod
    def sum_of(cls, r: int, polys: Iterable[TPolynomial]) -> TPolynomial:
        acc: dict[TMonomial, QScalar] = {}
        for p in polys:
            if p.r != r:
                raise ContextError(f"summand over r={p.r} in sum over r={r}")
            for mono, coeff in p.terms.items():
                prev = acc.get(mono)
                new = coeff if prev is None else prev + coeff
                if new:
                    acc[mono] = new
                elif prev is not None:
                    del acc[mono]
        return cls._raw(r, acc)

    # -- predicates and views -------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def canonical_terms(self) -> list[tuple[TMonomial, QScalar]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, mono: TMonomial) -> QScalar:
        return self.terms.get(mono, QScalar.of(self.r, 0))

    def max_weight(self) -> int:
        """Largest monomial weight, 0 for the zero polynomial."""
        return max((m.weight for m in self.terms), default=0)

    def homogeneous_weight(self) -> int | None:
        """The common weight of all monomials, or None if mixed/zero."""
        weights = {m.weight for m in self.terms}
        if len(weights) == 1:
            return weights.pop()
        return None

    def is_homogeneous(self, weight: int) -> bool:
        return all(m.weight == weight for m in self.terms)

    def lambda_exponents(self) -> set[int]:
        return {m.lambda_exp for m in self.terms}

    # -- arithmetic ------------------------------------------------------

    def _check_same(self, other: TPolynomial) -> None:
        if self.r != other.r:
            raise ContextError(f"cannot combine polynomials over r={self.r} and r={other.r}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TPolynomial):
            return NotImplemented
        return self.r == other.r and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        if not isinstance(other, TPolynomial):
            return NotImplemented
        self._check_same(other)
        return TPolynomial.sum_of(self.r, (self, other))

    def __neg__(self) -> TPolynomial:
        return TPolynomial._raw(self.r, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TPolynomial):
            return self.mul(other)
        if isinstance(other, (QScalar, int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__

    def scaled(self, c: CoeffLike) -> TPolynomial:
        if not isinstance(c, QScalar):
            c = QScalar.of(self.r, c)
        elif c.r != self.r:
            raise ContextError(f"scalar over r={c.r} applied to polynomial over r={self.r}")
        if not c:
            return TPolynomial.zero(self.r)
        return TPolynomial._raw(self.r, {m: coeff * c for m, coeff in self.terms.items()})

    def mul(self, other: TPolynomial, weight_cap: int | None = None) -> TPolynomial:
        """Product, optionally dropping monomials above a weight cap.

        The cap keeps graded series computations (log, exp) from growing
        past the truncation degree.
        """
        self._check_same(other)
        acc: dict[TMonomial, QScalar] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if weight_cap is not None and m1.weight + m2.weight > weight_cap:
                    continue
                mono = m1.times(m2)
                coeff = c1 * c2
                prev = acc.get(mono)
                new = coeff if prev is None else prev + coeff
                if new:
                    acc[mono] = new
                elif prev is not None:
                    del acc[mono]
        return TPolynomial._raw(self.r, acc)

    def mul_var(self, n: int, k: int = 1) -> TPolynomial:
        """Multiply by T_n^k."""
        check_index(self.r, n)
        if k < 1:
            raise ValueError(f"exponent must be positive, got {k}")
        return TPolynomial._raw(self.r, {m.times_var(n, k): c for m, c in self.terms.items()})

    def derive(self, n: int) -> TPolynomial:
        """Formal partial derivative with respect to T_n."""
        check_index(self.r, n)
        acc: dict[TMonomial, QScalar] = {}
        for mono, coeff in self.terms.items():
            exps = dict(mono.exps)
            e = exps.get(n)
            if not e:
                continue
            if e == 1:
                del exps[n]
            else:
                exps[n] = e - 1
            new_mono = TMonomial(mono.lambda_exp, tuple(sorted(exps.items())))
            acc[new_mono] = acc.get(new_mono, QScalar.of(self.r, 0)) + coeff * e
        return TPolynomial._raw(self.r, {m: c for m, c in acc.items() if c})

    def shift_lambda(self, k: int) -> TPolynomial:
        if not k:
            return self
        return TPolynomial._raw(self.r, {m.shift_lambda(k): c for m, c in self.terms.items()})

    def graded_part(self, d: int) -> TPolynomial:
        """Terms of weight d*(r+1); everything else dropped."""
        if d < 0:
            raise ValueError(f"degree must be nonnegative, got {d}")
        target = d * (self.r + 1)
        return TPolynomial._raw(self.r, {m: c for m, c in self.terms.items() if m.weight == target})

    def euler(self) -> TPolynomial:
        """Apply the Euler operator (1/(r+1)) * sum_n n T_n d/dT_n.

        Each monomial is an eigenvector with eigenvalue weight/(r+1).
        """
        scale = Fraction(1, self.r + 1)
        return TPolynomial._raw(
            self.r,
            {m: c * (m.weight * scale) for m, c in self.terms.items() if m.weight},
        )

    def __iter__(self) -> Iterator[tuple[TMonomial, QScalar]]:
        return iter(self.canonical_terms())

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        chunks = []
        for mono, coeff in self.canonical_terms():
            chunks.append(f"({coeff})*{mono}")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"TPolynomial(r={self.r}, {self})"
