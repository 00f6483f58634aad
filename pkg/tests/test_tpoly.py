"""Sparse graded polynomials in the time variables."""

import random
from fractions import Fraction

import pytest

from rspin import InvalidIndexError, QScalar, TMonomial, TPolynomial

from helpers import poly_of, qs, tau1_r3


def test_weight_examples():
    assert TMonomial.make(0, {1: 2, 2: 1}).weight == 4
    assert TMonomial.make(0, {}).weight == 0
    assert TMonomial.make(-2, {1: 3, 3: 1}).weight == 6


def test_graded_part_picks_by_weight():
    p = TPolynomial.var(3, 4) + TPolynomial.var(3, 1)
    assert p.graded_part(1) == TPolynomial.var(3, 4)
    assert p.graded_part(0).is_zero

    c = TPolynomial.const(3, 5)
    assert c.graded_part(0) == c

    tau1 = tau1_r3()
    tau2ish = TPolynomial.monomial(3, 1, 0, {4: 2})
    both = tau1 + tau2ish
    assert both.graded_part(1) == tau1
    assert both.graded_part(2) == tau2ish


def test_graded_parts_sum_back():
    rng = random.Random(3)
    p = _random_poly(rng, 3)
    total = TPolynomial.zero(3)
    for d in range(0, p.max_weight() + 1):
        part = p.graded_part(d) if d * 4 <= p.max_weight() else TPolynomial.zero(3)
        assert part.is_homogeneous(d * 4)
        total = total + part
    # graded parts only exist at weights divisible by r+1; collect the rest
    rest = TPolynomial._raw(3, {m: c for m, c in p.terms.items() if m.weight % 4})
    assert total + rest == p


def test_mul_var_examples():
    one = TPolynomial.one(3)
    assert one.mul_var(2, 1) == TPolynomial.var(3, 2)
    t2 = TPolynomial.var(3, 2)
    assert t2.mul_var(2, 2) == TPolynomial.monomial(3, 1, 0, {2: 3})
    p = TPolynomial.var(3, 1) + TPolynomial.var(3, 4)
    assert p.mul_var(1, 1) == TPolynomial.monomial(3, 1, 0, {1: 2}) + TPolynomial.monomial(3, 1, 0, {1: 1, 4: 1})


def test_derive_examples():
    p = TPolynomial.monomial(3, 1, 0, {2: 2, 1: 1})
    assert p.derive(2) == TPolynomial.monomial(3, 2, 0, {2: 1, 1: 1})
    q = TPolynomial.monomial(3, 1, 0, {2: 4})
    assert q.derive(5).is_zero
    # derivative of the degree-1 tau piece in its first variable
    expected = TPolynomial.monomial(
        3, QScalar.of(3, 0, Fraction(-2, 9)), -2, {2: 1, 1: 1}
    )
    assert tau1_r3().derive(1) == expected


def test_invalid_indices_rejected():
    with pytest.raises(InvalidIndexError):
        TPolynomial.var(3, 3)
    with pytest.raises(InvalidIndexError):
        TPolynomial.var(3, 0)
    with pytest.raises(InvalidIndexError):
        TPolynomial.one(3).mul_var(6, 1)
    with pytest.raises(InvalidIndexError):
        TPolynomial.one(3).derive(9)
    with pytest.raises(InvalidIndexError):
        TPolynomial.monomial(2, 1, 0, {4: 1})


def _random_poly(rng, r, max_terms=5):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = {}
        for _ in range(rng.randint(0, 3)):
            n = rng.randint(1, 8)
            if n % r == 0:
                continue
            exps[n] = rng.randint(1, 3)
        mono = TMonomial.make(2 * rng.randint(-2, 1), exps)
        terms[mono] = qs(r, Fraction(rng.randint(-6, 6), rng.randint(1, 4)),
                         Fraction(rng.randint(-6, 6), rng.randint(1, 4)))
    return TPolynomial(r, terms)


def test_ring_axioms_on_random_polynomials():
    rng = random.Random(99)
    for _ in range(40):
        r = rng.choice((2, 3, 5))
        p, q, w = (_random_poly(rng, r) for _ in range(3))
        assert (p + q) + w == p + (q + w)
        assert p + q == q + p
        assert p.mul(q) == q.mul(p)
        assert p.mul(q.mul(w)) == p.mul(q).mul(w)
        assert p.mul(q + w) == p.mul(q) + p.mul(w)
        assert (p - p).is_zero
        assert p.mul(TPolynomial.one(r)) == p


def test_derivative_is_a_derivation():
    rng = random.Random(4242)
    for _ in range(30):
        r = rng.choice((2, 3))
        p, q = _random_poly(rng, r), _random_poly(rng, r)
        n = rng.choice([k for k in range(1, 6) if k % r])
        lhs = p.mul(q).derive(n)
        rhs = p.derive(n).mul(q) + p.mul(q.derive(n))
        assert lhs == rhs


def test_lambda_exponent_additive_under_multiplication():
    a = TPolynomial.monomial(3, 1, -2, {1: 1})
    b = TPolynomial.monomial(3, 1, 4, {2: 1})
    prod = a.mul(b)
    ((mono, _),) = prod.canonical_terms()
    assert mono.lambda_exp == 2


def test_canonical_order_and_unique_representation():
    p = poly_of(
        3,
        (1, 0, {4: 1}),
        (2, -2, {1: 2, 2: 1}),
        (3, 0, {1: 1}),
    )
    keys = [m.sort_key() for m, _ in p.canonical_terms()]
    assert keys == sorted(keys)
    q = poly_of(
        3,
        (3, 0, {1: 1}),
        (2, -2, {2: 1, 1: 2}),
        (1, 0, {4: 1}),
    )
    assert p == q
    assert [t for t in p.canonical_terms()] == [t for t in q.canonical_terms()]


def test_zero_coefficients_never_stored():
    p = TPolynomial(3, {TMonomial.make(0, {1: 1}): qs(3, 0)})
    assert p.is_zero
    q = TPolynomial.var(3, 1) - TPolynomial.var(3, 1)
    assert q.is_zero and len(q) == 0


def test_euler_eigenvalues():
    mono = TPolynomial.monomial(3, 1, -2, {1: 2, 2: 1})  # weight 4
    assert mono.euler() == mono.scaled(Fraction(4, 4))
    other = TPolynomial.monomial(2, 1, 0, {3: 1, 1: 1})  # weight 4, r=2
    assert other.euler() == other.scaled(Fraction(4, 3))


def test_weight_cap_multiplication():
    a = TPolynomial.var(3, 4) + TPolynomial.var(3, 1)
    b = TPolynomial.var(3, 4)
    capped = a.mul(b, weight_cap=5)
    assert capped == TPolynomial.monomial(3, 1, 0, {1: 1, 4: 1})


def test_shift_lambda():
    p = tau1_r3()
    assert p.shift_lambda(2).shift_lambda(-2) == p
    assert p.shift_lambda(0) is p
