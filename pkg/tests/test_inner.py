import random
from math import comb

import pytest

from liftcocycle.lifting.inner import (
    alpha_coboundary_check, choice_schema, choice_vectors, expansion_data, inner_expansion_check,
    layer_multiplicity, rl_positions,
)
from liftcocycle.matrix_models import MatrixAlgebra
from liftcocycle.scalars import PrimeField

M = MatrixAlgebra(3, PrimeField(1000003))


def test_choice_vectors():
    vecs = choice_vectors(2)
    assert len(vecs) == 16
    assert rl_positions("RLRL") == [1, 3]
    assert rl_positions("LLRR") == []


def test_choice_schema_sign():
    assert choice_schema("LL").coeff == 1
    assert choice_schema("LR").coeff == -1
    assert choice_schema("RR").coeff == 1


@pytest.mark.parametrize("K", range(0, 6))
def test_layer_multiplicity_closes_at_k(K):
    # after K layers every S_K term is cancelled exactly once
    assert layer_multiplicity(K, K) == (1 if K else 0)
    assert sum((-1) ** (j + 1) * comb(K, j) for j in range(1, K + 1)) == layer_multiplicity(K, K)


def test_expansion_split_for_n1():
    rng = random.Random(0)
    fam = M.inner_family([M.sample(rng) for _ in range(2)])
    for _ in range(3):
        d = expansion_data(1, M, fam, [M.sample(rng) for _ in range(3)])
        assert (d["lhs"] - d["distributed"]) % M.field.p == 0
        # k = 3 for n = 1
        assert (d["lhs"] - 3 * d["alpha"] - d["S"]) % M.field.p == 0
        assert (d["S"] + d["Sigma"][1]) % M.field.p == 0


@pytest.mark.parametrize("n", [1, 2])
def test_inner_checks_pass(n):
    res = inner_expansion_check(n, M, sample_count=3, closure_samples=2, seed=1)
    assert [r.status for r in res] == ["pass"] * 4
    assert res[0].details["k"] == str(2 * n + 1)


def test_zero_samples_skip_sections():
    res = inner_expansion_check(1, M, sample_count=0, closure_samples=2)
    assert [r.check for r in res] == ["cor-4.3(n=1)"]


def test_alpha_is_a_coboundary():
    r = alpha_coboundary_check(1, M, sample_count=3, seed=2)
    assert r.passed and r.details["a_rational"] == "1/2"
