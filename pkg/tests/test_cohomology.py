import itertools
import random

from liftcocycle.cohomology import (
    Cochain, DerivationChain, alternate, ce_differential, ce_differential_halfsum, chain_boundary,
    differential_cochain, is_cocycle, perm_sign, solve_scale, verify_identity,
)
from liftcocycle.matrix_models import CurrentAlgebra, MatrixAlgebra
from liftcocycle.scalars import QQ, PrimeField

M = MatrixAlgebra(2)
Mp = MatrixAlgebra(2, PrimeField(10007))


def _inversions(p):
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])


def test_perm_sign_matches_inversion_parity():
    for p in itertools.permutations(range(5)):
        assert perm_sign(p) == (-1) ** _inversions(p)


def _tr3(a, b, c):
    return M.trace(M.mul(M.mul(a, b), c))


def test_unalternated_triple_trace_is_not_closed():
    psi = Cochain(3, _tr3, alternating=False, name="tr3")
    rep = is_cocycle(psi, M, M.sample, 20, seed=0)
    assert rep.status == "fail"
    assert rep.witness is not None


def test_alternated_triple_trace_is_closed():
    psi = alternate(_tr3, 3, QQ, "Alt tr3")
    assert is_cocycle(psi, M, M.sample, 10, seed=1).passed


def test_d_squared_vanishes():
    rng = random.Random(2)
    f = [Mp.sample(rng) for _ in range(2)]
    psi = alternate(lambda a, b: Mp.trace(Mp.mul(Mp.mul(f[0], a), Mp.mul(f[1], b))), 2, Mp.field)
    dd = differential_cochain(differential_cochain(psi, Mp), Mp)
    for _ in range(3):
        assert dd(*[Mp.sample(rng) for _ in range(4)]) == 0


def test_halfsum_form_is_minus_standard():
    rng = random.Random(3)
    f = [Mp.sample(rng) for _ in range(3)]

    def wedge(a, b, c):
        return Mp.trace(Mp.mul(f[0], a)) * Mp.trace(Mp.mul(f[1], b)) * Mp.trace(Mp.mul(f[2], c))

    psi = alternate(wedge, 3, Mp.field)
    for _ in range(3):
        t = [Mp.sample(rng) for _ in range(4)]
        assert (ce_differential_halfsum(psi, t, Mp) + ce_differential(psi, t, Mp)) % 10007 == 0


def test_solve_scale():
    assert solve_scale([2, 4, 0], [1, 2, 0], QQ) == (2, True)
    assert solve_scale([2, 5], [1, 2], QQ) == (2, False)
    assert solve_scale([0, 0], [0, 0], QQ) == (None, True)
    assert solve_scale([1], [0], QQ) == (None, False)


def test_verify_identity_reports_vacuous_runs():
    zero = lambda t: 0
    r = verify_identity(zero, zero, [1, 2], QQ, solve_constant=True)
    assert r.status == "info"
    r = verify_identity(lambda t: 3 * t, lambda t: t, [1, 2], QQ, solve_constant=True)
    assert r.passed and r.details["constant"] == "3"


def test_chain_boundary_of_a_single_derivation():
    C = CurrentAlgebra(2, 2)
    fam = C.derivation_family()
    assert chain_boundary(DerivationChain([(1, (1, 2))], fam), C, C.generators()[:3]).passed
