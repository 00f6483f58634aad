"""Free-boson oscillator algebra, W-operator modes, and the degree-raising
operators that drive the graded recursion.

Conventions.  For a positive variable index u (u % r != 0) the oscillator
with mode index u/r acts as lam * d/dT_u, and the one with mode index -u/r
acts as lam^{-1} * u * T_u.  Products are kept normal ordered: annihilators
(derivatives) act before creators (multiplications), so a finite list of
NormalTerm values represents an operator exactly.

The mode W(k, j, m) is realized as the sum over multisets {i_1 .. i_{k-j}}
of nonintegral multiples of 1/r with i_1 + .. + i_{k-j} = m + j(r+1)/r of
the normal-ordered oscillator product, weighted by

    multinomial * (-r*s)^j / (j! * (k-j)!)        with s = sqrt(-r),

carrying a lam shift of -j, plus the constant (r^2 - 1)/24 exactly when
(k, j, m) = (2, 0, 0).  The j-power alternates in sign; the r=3 degree-one
tau fixture pins this convention (with the non-alternating variant the k=2
and k=3 contributions of the first raising operator cancel to zero).

Applying W(k, j, m) to a weight-homogeneous polynomial changes the weight
by exactly -r*m - j*(r+1), which is what makes finite creator/annihilator
weight caps exact rather than approximate.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import ContextError, ContractError, InvalidModeError, InvalidSpecError
from .scalar import QScalar
from .tpoly import TPolynomial


@dataclass(frozen=True)
class BetaIndex:
    """Oscillator label u, standing for the mode index u/r.

    Positive u is an annihilator (scaled derivative), negative u a creator
    (scaled multiplication).  u must not be divisible by r.
    """

    u: int

    def validate(self, r: int) -> None:
        if not isinstance(self.u, int) or self.u == 0 or self.u % r == 0:
            raise InvalidModeError(f"mode index {self.u}/{r} is integral or zero")

    @property
    def is_creator(self) -> bool:
        return self.u < 0


def apply_beta(u: int | BetaIndex, poly: TPolynomial) -> TPolynomial:
    """Apply a single oscillator: u > 0 gives lam * d/dT_u, u < 0 gives
    lam^{-1} * |u| * T_{|u|}."""
    if isinstance(u, BetaIndex):
        u = u.u
    BetaIndex(u).validate(poly.r)
    if u > 0:
        return poly.derive(u).shift_lambda(1)
    n = -u
    return poly.mul_var(n, 1).scaled(n).shift_lambda(-1)


@dataclass(frozen=True)
class NormalTerm:
    """One normal-ordered product: annihilators differentiate first, then
    creators multiply, then the coefficient and lam bookkeeping apply.

    creators and annihilators hold positive variable indices (sorted); the
    net lam change on application is lambda_shift + #annihilators -
    #creators, each oscillator contributing +1 or -1.
    """

    creators: tuple[int, ...]
    annihilators: tuple[int, ...]
    coeff: QScalar
    lambda_shift: int

    @property
    def creator_weight(self) -> int:
        return sum(self.creators)

    @property
    def annihilator_weight(self) -> int:
        return sum(self.annihilators)

    def apply(self, poly: TPolynomial) -> TPolynomial:
        out = poly
        for u in self.annihilators:
            out = out.derive(u)
            if out.is_zero:
                return out
        factor = self.coeff
        for u in self.creators:
            out = out.mul_var(u, 1)
            factor = factor * u
        net = self.lambda_shift + len(self.annihilators) - len(self.creators)
        return out.scaled(factor).shift_lambda(net)


OperatorSum = tuple[NormalTerm, ...]


def apply_operator_sum(terms: OperatorSum, poly: TPolynomial) -> TPolynomial:
    return TPolynomial.sum_of(poly.r, (t.apply(poly) for t in terms))


@dataclass(frozen=True)
class WModeSpec:
    """Label (k, j, m) of one graded component of a W-constraint mode."""

    r: int
    k: int
    j: int
    m: int

    def validate(self) -> None:
        if self.r < 2:
            raise InvalidSpecError(f"r must be >= 2, got {self.r}")
        if not 2 <= self.k <= self.r:
            raise InvalidSpecError(f"k must lie in [2, r={self.r}], got {self.k}")
        if not 0 <= self.j <= self.k - 1:
            raise InvalidSpecError(f"j must lie in [0, k-1={self.k - 1}], got {self.j}")
        if self.m < -(self.k - 1):
            raise InvalidSpecError(f"m must be >= -(k-1)={-(self.k - 1)}, got {self.m}")

    @property
    def weight_shift(self) -> int:
        """Exact weight change on any homogeneous input."""
        return -self.r * self.m - self.j * (self.r + 1)


def _partitions(total: int, count: int, r: int, max_part: int | None = None):
    """Multisets of `count` positive integers, none divisible by r, summing
    to `total`, yielded as non-increasing tuples."""
    if count == 0:
        if total == 0:
            yield ()
        return
    if total < count:
        return
    hi = total - (count - 1)
    if max_part is not None:
        hi = min(hi, max_part)
    for first in range(hi, 0, -1):
        if first % r == 0:
            continue
        for rest in _partitions(total - first, count - 1, r, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _w_mode_terms(r: int, k: int, j: int, m: int, creator_cap: int, annihilator_cap: int) -> OperatorSum:
    size = k - j
    # Total annihilator weight minus creator weight is pinned by the label.
    net = r * m + j * (r + 1)
    unit = (QScalar.of(r, 0, -r) ** j) * Fraction(1, factorial(j) * factorial(size))
    terms: list[NormalTerm] = []
    for p in range(size + 1):  # number of annihilators
        q = size - p
        wa_values = range(p, annihilator_cap + 1) if p else (0,)
        for wa in wa_values:
            wc = wa - net
            if q == 0:
                if wc != 0:
                    continue
            elif wc < q or wc > creator_cap:
                continue
            for ann in _partitions(wa, p, r):
                for cre in _partitions(wc, q, r):
                    repeats = 1
                    for count in Counter(ann).values():
                        repeats *= factorial(count)
                    for count in Counter(cre).values():
                        repeats *= factorial(count)
                    coeff = unit * (factorial(size) // repeats)
                    terms.append(
                        NormalTerm(
                            creators=tuple(sorted(cre)),
                            annihilators=tuple(sorted(ann)),
                            coeff=coeff,
                            lambda_shift=-j,
                        )
                    )
    if k == 2 and j == 0 and m == 0:
        terms.append(
            NormalTerm((), (), QScalar.of(r, Fraction(r * r - 1, 24)), 0)
        )
    terms.sort(key=lambda t: (t.creators, t.annihilators))
    return tuple(terms)


def w_mode_terms(spec: WModeSpec, creator_weight_cap: int, annihilator_weight_cap: int) -> OperatorSum:
    """Finite normal-ordered truncation of W(k, j, m).

    Keeps every term whose total creator weight and total annihilator weight
    fit under the respective caps; on inputs whose monomial weights stay
    under the annihilator cap this truncation is exact.
    """
    spec.validate()
    if creator_weight_cap < 0 or annihilator_weight_cap < 0:
        raise ValueError("weight caps must be nonnegative")
    return _w_mode_terms(spec.r, spec.k, spec.j, spec.m, creator_weight_cap, annihilator_weight_cap)


def apply_w_mode(spec: WModeSpec, poly: TPolynomial, target_weight_cap: int) -> TPolynomial:
    """Apply W(k, j, m) to a polynomial.

    The annihilator cap is taken from the input's own maximal weight; the
    creator cap is the caller's target.  For homogeneous input of weight w
    the result is homogeneous of weight w - r*m - j*(r+1), so passing that
    value as the target cap loses nothing.
    """
    spec.validate()
    if spec.r != poly.r:
        raise ContextError(f"mode over r={spec.r} applied to polynomial over r={poly.r}")
    if poly.is_zero or target_weight_cap < 0:
        return TPolynomial.zero(poly.r)
    terms = w_mode_terms(spec, target_weight_cap, poly.max_weight())
    return apply_operator_sum(terms, poly)


def mode_bound(r: int, k: int, target_degree: int) -> int:
    """Largest outer mode index m that can contribute when raising into the
    given target degree: the created variable T_{r*m + k - 1} must still fit
    in a monomial of weight target_degree * (r + 1)."""
    if not 2 <= k <= r:
        raise InvalidSpecError(f"k must lie in [2, r={r}], got {k}")
    return (target_degree * (r + 1) - (k - 1)) // r


def raising_prefactor(r: int, k: int) -> QScalar:
    """Scalar -(k-1)! / ((r+1) * (-r*s)^(k-1)) in front of one inner mode."""
    base = QScalar.of(r, 0, -r) ** (k - 1)
    return base.inv() * Fraction(-factorial(k - 1), r + 1)


def raising_contribution(r: int, l: int, k: int, m: int, poly: TPolynomial, target_degree: int) -> TPolynomial:
    """The (k, m) summand of the degree raiser applied to a homogeneous
    polynomial of degree target_degree - l."""
    j = k - 1 - l
    spec = WModeSpec(r, k, j, m - k + 1)
    w_in = (target_degree - l) * (r + 1)
    w_mid = w_in + spec.weight_shift
    if w_mid < 0:
        return TPolynomial.zero(r)
    inner = apply_w_mode(spec, poly, w_mid)
    if inner.is_zero:
        return inner
    n_out = r * m + (k - 1)
    scale = raising_prefactor(r, k) * n_out
    # lam: +(k-1) from the prefactor, -1 from the outer creator.
    return inner.mul_var(n_out, 1).scaled(scale).shift_lambda(k - 2)


def apply_raising_operator(r: int, l: int, poly: TPolynomial, target_degree: int) -> TPolynomial:
    """Apply the degree-l raiser to a homogeneous polynomial of degree
    target_degree - l, producing a homogeneous result of degree
    target_degree.

    The outer mode sum is truncated at mode_bound(r, k, target_degree);
    beyond it every contribution vanishes on such input, so the truncation
    is exact.
    """
    if not 1 <= l <= r - 1:
        raise InvalidSpecError(f"raiser label must lie in [1, r-1={r - 1}], got {l}")
    if poly.r != r:
        raise ContextError(f"raiser over r={r} applied to polynomial over r={poly.r}")
    if poly.is_zero:
        return poly
    w_in = (target_degree - l) * (r + 1)
    if w_in < 0 or not poly.is_homogeneous(w_in):
        raise ContractError(
            f"input must be homogeneous of degree {target_degree - l} (weight {w_in})"
        )
    parts = []
    for k in range(l + 1, r + 1):
        for m in range(0, mode_bound(r, k, target_degree) + 1):
            parts.append(raising_contribution(r, l, k, m, poly, target_degree))
    return TPolynomial.sum_of(r, parts)
