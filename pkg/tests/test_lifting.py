import random
from math import comb

import pytest

from liftcocycle.errors import ParseError, UnknownFormula
from liftcocycle.lifting import (
    MODES, MarkedInterval, brute_force_interval_count, builtin_formula, enumerate_marked_intervals, evaluate,
    generate_lifting_formula, interval_to_schema, loads, parse_schema, psi3, psi5, psi5_tilde, psi_tilde,
)
from liftcocycle.lifting.schema import QFactor
from liftcocycle.matrix_models import MatrixAlgebra
from liftcocycle.psido import PsiDOAlgebra
from liftcocycle.scalars import PrimeField

from oracles import count_gapped_subsets, naive_evaluate, naive_schema

Mp = MatrixAlgebra(2, PrimeField(10007))


def test_schema_round_trip():
    for f in (psi3(), psi5(), psi5_tilde(), psi_tilde(3), generate_lifting_formula(3)):
        g = loads(f.dumps(), f.mode)
        assert g.multiset() == f.multiset()
        assert (g.m, g.l) == (f.m, f.l)


def test_schema_parse_errors():
    with pytest.raises(ParseError):
        parse_schema("D1[A1] A2")
    with pytest.raises(ParseError):
        parse_schema("1 * D1[B1] A2")
    with pytest.raises(ValueError):
        parse_schema("1 * D1[A1] A1")


@pytest.mark.parametrize("n", range(1, 7))
def test_interval_counts(n):
    for N in range(1, n + 1):
        got = len(enumerate_marked_intervals(n, N))
        assert got == brute_force_interval_count(n, N) == count_gapped_subsets(n, N) == comb(2 * n - N, N)


def test_marked_interval_validation():
    with pytest.raises(ValueError):
        MarkedInterval(3, (1, 2))
    with pytest.raises(ValueError):
        MarkedInterval(2, (4,))


def test_generated_sizes():
    assert [len(generate_lifting_formula(n).schemas) for n in (1, 2, 3)] == [2, 5, 13]
    f3 = generate_lifting_formula(3)
    assert sorted(s.q_degree for s in f3.schemas) == [0] + [1] * 5 + [2] * 6 + [3]


def test_first_linear_term_for_n3():
    s = interval_to_schema(MarkedInterval(3, (1,)))
    assert str(s) == "1 * A1 Q12 A2 D3[A3] D4[A4] D5[A5] D6[A6] A7"


def test_generator_matches_hand_written_n2():
    assert generate_lifting_formula(2).multiset() == psi5().multiset()


def test_builtin_names():
    assert builtin_formula("psi7").m == 7
    assert builtin_formula("psi_tilde:2").m == 5
    with pytest.raises(UnknownFormula):
        builtin_formula("psi4")


def _inner_tuple(seed, m, l):
    rng = random.Random(seed)
    fam = Mp.inner_family([Mp.sample(rng) for _ in range(l)])
    return fam, [Mp.sample(rng) for _ in range(m)]


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("text", [
    "1 * D1[A1] D2[A2] A3",
    "1 * Q12 A1 A2 A3",
    "1 * A1 Q12 A2 D3[A3] A4",
    "1 * D1[A1] Q23 A2 A3",
    "1 * D1 A1 A2 D2 A3",
])
def test_dp_evaluator_matches_permutation_sum(mode, text):
    f = loads(text + "\n", mode)
    for seed in range(3):
        fam, args = _inner_tuple(seed, f.m, max(f.l, 3))
        assert evaluate(f, Mp, fam, args) == naive_evaluate(f, Mp, fam, args)


def test_paired_is_relabel_over_two_per_q():
    f = loads("1 * A1 Q12 A2 Q34 A3\n")
    fam, args = _inner_tuple(7, 3, 4)
    paired = evaluate(f, Mp, fam, args, "paired")
    relabel = evaluate(f, Mp, fam, args, "relabel")
    assert relabel == paired * 4 % 10007


def test_dp_evaluator_on_symbols():
    A = PsiDOAlgebra(1, depth=6)
    fam = A.log_family()
    rng = random.Random(5)
    args = [A.sample_differential(rng, degree=2, max_terms=2) for _ in range(3)]
    for s in psi3().schemas:
        single = loads(str(s) + "\n")
        assert evaluate(single, A, fam, args) == naive_schema(s, A, fam, args, "paired")


def test_psi3_regression_value():
    A = PsiDOAlgebra(1, depth=4)
    assert evaluate(psi3(), A, A.log_family(), [A.one(), A.x(), A.d()]) == -3


def test_repeated_argument_gives_zero():
    B = PsiDOAlgebra(2, depth=4)
    args = [B.one(), B.x(1), B.x(1), B.d(1), B.d(2)]
    assert evaluate(psi5(), B, B.log_family(), args) == 0


def test_worker_count_does_not_change_results():
    fam, args = _inner_tuple(11, 5, 4)
    f = generate_lifting_formula(2)
    assert evaluate(f, Mp, fam, args, jobs=1) == evaluate(f, Mp, fam, args, jobs=3)


def test_q_factor_printing():
    assert str(QFactor(1, 2)) == "Q12"
    assert str(QFactor(10, 11)) == "Q{10,11}"
