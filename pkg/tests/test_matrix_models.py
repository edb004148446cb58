import random

import pytest
from hypothesis import given, settings, strategies as st

from liftcocycle.errors import ParseError
from liftcocycle.framework import check_derivation_conditions, check_trace_property
from liftcocycle.matrix_models import CurrentAlgebra, MatrixAlgebra
from liftcocycle.scalars import PrimeField

M = MatrixAlgebra(3)
Mp = MatrixAlgebra(3, PrimeField(10007))


def test_units_multiply():
    e12, e21 = M.unit(1, 2), M.unit(2, 1)
    assert M.mul(e12, e21) == M.unit(1, 1)
    assert M.is_zero(M.mul(e12, e12))
    assert M.trace(M.one()) == 3


@given(st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_trace_of_commutator(seed):
    rng = random.Random(seed)
    a, b = Mp.sample(rng), Mp.sample(rng)
    assert Mp.trace(Mp.bracket(a, b)) == 0


def test_parse_format():
    a = M.parse("1 2 3; 4 5 6; 7 8 1/2")
    assert M.parse(M.format(a)) == a
    assert M.parse("1,0,0\n0,1,0\n0,0,1") == M.one()
    with pytest.raises(ParseError):
        M.parse("1 2; 3")


def test_inner_family_conditions():
    rng = random.Random(0)
    fam = Mp.inner_family([Mp.sample(rng) for _ in range(4)])
    assert check_derivation_conditions(Mp, fam, 10, seed=1).passed
    assert check_trace_property(Mp, 10, seed=2).passed


def test_current_algebra_trace_and_derivative():
    C = CurrentAlgebra(2, 1)
    e = C.current(C.mat.unit(1, 1), 3)
    de = C.loop_derivative(1, e)
    assert de == C.current(C.mat.unit(1, 1, 3), 2)
    assert C.trace(C.current(C.mat.one(), -1)) == 2
    assert C.trace(C.current(C.mat.one(), 0)) == 0


def test_current_algebra_derivation_conditions():
    C = CurrentAlgebra(2, 2)
    assert check_derivation_conditions(C, C.derivation_family(), 10, seed=3).passed
