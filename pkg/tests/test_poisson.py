import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from liftcocycle.cohomology import Cochain, is_cocycle, perm_sign
from liftcocycle.errors import NonMonomialInput, ParseError
from liftcocycle.poisson import PoissonAlgebra, f_from_log_monomials, psi0_density, psi_d_evaluate, psi_f_evaluate

P1 = PoissonAlgebra(1)
P2 = PoissonAlgebra(2)

seeds = st.integers(0, 10**6)


def _three(alg, seed):
    rng = random.Random(seed)
    return [alg.sample(rng) for _ in range(3)]


def test_canonical_brackets():
    assert P2.poisson_bracket(P2.p(1), P2.q(1)) == P2.one()
    assert not P2.poisson_bracket(P2.p(1), P2.q(2))
    assert not P2.poisson_bracket(P2.q(1), P2.q(2))


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_bracket_is_a_lie_bracket(seed):
    f, g, h = _three(P2, seed)
    br = P2.poisson_bracket
    assert P2.is_zero(P2.add(br(f, g), br(g, f)))
    jac = P2.linear_combination([(1, br(f, br(g, h))), (1, br(g, br(h, f))), (1, br(h, br(f, g)))])
    assert P2.is_zero(jac)


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_leibniz_rule(seed):
    f, g, h = _three(P1, seed)
    lhs = P1.poisson_bracket(f, P1.mul(g, h))
    rhs = P1.add(P1.mul(P1.poisson_bracket(f, g), h), P1.mul(g, P1.poisson_bracket(f, h)))
    assert lhs == rhs


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_residue_kills_brackets(seed):
    f, g, _ = _three(P2, seed)
    assert P2.residue_trace(P2.poisson_bracket(f, g)) == 0


def test_parse_format_round_trip():
    rng = random.Random(1)
    for _ in range(100):
        f = P2.sample(rng)
        assert P2.parse(P2.format(f)) == f
    assert P1.parse("3 p1 q1^-1 - 1/2") == P1.linear_combination(
        [(3, P1.monomial((1, -1))), (-P1.field("1/2"), P1.one())])
    with pytest.raises(ParseError):
        P1.parse("p3")


def _naive_psi_f(alg, F, args):
    total = 0
    m = len(args)
    for s in itertools.permutations(range(m)):
        acc = F
        for v in range(alg.nvars):
            acc = alg.mul(acc, alg.partial(args[s[v]], v))
        acc = alg.mul(acc, args[s[-1]])
        total += perm_sign(s) * alg.residue_trace(acc)
    return total


def test_psi_f_matches_explicit_alternation():
    rng = random.Random(2)
    F = psi0_density(P1)
    for _ in range(10):
        args = [P1.sample(rng) for _ in range(3)]
        assert psi_f_evaluate(P1, F, args) == _naive_psi_f(P1, F, args)


def test_psi0_nonvanishing_values():
    for n in (1, 2, 3):
        P = PoissonAlgebra(n)
        args = [P.one()] + [P.p(i) for i in range(1, n + 1)] + [P.q(i) for i in range(1, n + 1)]
        assert psi_f_evaluate(P, psi0_density(P), args) == 1


def test_log_route_agrees_with_density():
    ds = [P1.monomial((2, 1)), P1.monomial((0, 3))]
    F = f_from_log_monomials(P1, ds)
    rng = random.Random(4)
    for _ in range(5):
        args = [P1.sample(rng) for _ in range(3)]
        assert psi_d_evaluate(P1, ds, args) == psi_f_evaluate(P1, F, args)


def test_log_monomials_must_be_monomials():
    with pytest.raises(NonMonomialInput):
        f_from_log_monomials(P1, [P1.add(P1.p(), P1.one()), P1.q()])


def test_psi0_is_closed_for_n1():
    psi = Cochain(3, lambda *a: psi_f_evaluate(P1, psi0_density(P1), list(a)))
    rep = is_cocycle(psi, P1, lambda r: P1.sample(r, lo=-2, hi=2), 10, seed=5)
    assert rep.passed
