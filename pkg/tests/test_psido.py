import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from liftcocycle.errors import ParseError, PrecisionInsufficient
from liftcocycle.framework import check_derivation_conditions, check_trace_property, derivation_commutator
from liftcocycle.psido import LN_D, LN_X, LogDerivationId, PsiDOAlgebra, sufficient_floor

A = PsiDOAlgebra(1, depth=8)
B = PsiDOAlgebra(2, depth=6)

exps = st.integers(0, 3)
diffops = st.lists(st.tuples(exps, exps, st.integers(-3, 3)), min_size=1, max_size=3).map(
    lambda ts: A.linear_combination([(1, A.monomial((a,), (b,), c)) for a, b, c in ts]))


def test_weyl_relation():
    d, x = A.d(), A.x()
    assert A.bracket(d, x) == A.one()
    # d x^2 = x^2 d + 2x
    assert A.mul(d, A.x(power=2)) == A.linear_combination([(1, A.monomial((2,), (1,))), (2, A.x())])


def test_inverse_of_d():
    prod = A.mul(A.d(), A.d(power=-1))
    assert prod == A.one()


def test_negative_powers_compose_with_a_series():
    # d^-1 x = x d^-1 - d^-2 + 0 ... exactly (the series stops)
    v = A.mul(A.d(power=-1), A.x())
    assert v.terms == {((1,), (-1,)): 1, ((0,), (-2,)): -1}


@given(diffops, diffops, diffops)
@settings(max_examples=40, deadline=None)
def test_associativity_on_differential_operators(a, b, c):
    assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))


@given(diffops, diffops)
@settings(max_examples=40, deadline=None)
def test_bracket_antisymmetry(a, b):
    assert A.is_zero(A.add(A.bracket(a, b), A.bracket(b, a)))


def test_q_element_coefficients():
    q = A.q_element(1)
    for m in range(1, 9):
        assert q.terms[((-m,), (-m,))] == Fraction(factorial(m - 1), m)
    assert q.floor == (-8,)


def test_log_derivation_on_generators():
    ln_d = LogDerivationId(1, LN_D)
    ln_x = LogDerivationId(1, LN_X)
    assert A.apply_log_derivation(ln_d, A.x()) == A.d(power=-1)
    assert A.apply_log_derivation(ln_x, A.d()).terms == {((-1,), (0,)): -1}
    assert A.is_zero(A.apply_log_derivation(ln_d, A.d()))


def test_log_derivation_commutator_is_inner():
    fam = A.log_family()
    for g in (A.x(), A.d()):
        lhs = derivation_commutator(A, fam, 1, 2, g)
        rhs = A.bracket(fam.q(1, 2), g)
        assert A.is_zero(A.sub(lhs, rhs))


def test_trace_is_the_residue():
    e = A.linear_combination([(1, A.monomial((-1,), (-1,), 5)), (1, A.monomial((2,), (1,), 7))])
    assert A.trace(e) == 5
    e2 = B.monomial((-1, -1), (-1, -1), 3)
    assert B.trace(e2) == 3


def test_trace_property_and_conditions():
    assert check_trace_property(A, 30, seed=1).passed
    assert check_derivation_conditions(A, A.log_family(), 20, seed=2).passed


def test_parse_format_round_trip():
    rng = random.Random(0)
    for _ in range(50):
        e = B.sample(rng)
        assert B.parse(B.format(e)) == e
    q = A.q_element(1, floor=(-3,))
    assert A.parse(A.format(q)) == q
    assert "floor: d1>=-3" in A.format(q)


def test_parse_errors():
    with pytest.raises(ParseError):
        A.parse("+ 2 x2")
    with pytest.raises(ParseError):
        A.parse("+ 1 floor: d1>=x")


def test_precision_is_reported_not_guessed():
    q = A.q_element(1, floor=(-2,))
    with pytest.raises(PrecisionInsufficient):
        A.mul(q, A.d(power=3), floor=(-5,))


def test_sufficient_floor_is_exact_for_products():
    rng = random.Random(3)
    for _ in range(10):
        fs = [A.sample_differential(rng, degree=2, max_terms=2) for _ in range(3)]
        floor = sufficient_floor([(f.ceil, (0,)) for f in fs])
        deep = PsiDOAlgebra(1, depth=20)
        exact = deep.trace(deep.product(fs))
        assert A.product_trace(fs, floor) == exact
