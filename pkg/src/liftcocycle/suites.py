"""Named verification suites.

Each suite takes a :class:`SuiteConfig` and returns a list of
:class:`CheckResult` records.  All sampled inputs are drawn from
``random.Random(seed)`` streams, so seed and field fully determine a run.
"""
from __future__ import annotations

import itertools
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, factorial
from typing import Callable

from .cohomology import (
    alternate,
    Cochain,
    DerivationChain,
    ce_differential,
    ce_differential_halfsum,
    chain_boundary,
    is_cocycle,
    perm_sign,
    solve_scale,
    verify_identity,
)
from .errors import NotACycle, PrecisionInsufficient, UnknownSuite
from .framework import check_derivation_conditions, check_trace_property, derivation_commutator
from .lifting import (
    Bare,
    LiftingFormula,
    Plain,
    TermSchema,
    builtin_formula,
    enumerate_marked_intervals,
    evaluate,
    generate_lifting_formula,
    loads,
    psi3,
    psi5,
    psi5_tilde,
    psi_tilde,
)
from .lifting.evaluate import EvalContext, schema_value
from .lifting.formulas import brute_force_interval_count, chain_lift
from .lifting.inner import inner_expansion_check, alpha_coboundary_check
from .lifting.parallel import default_jobs, pmap
from .matrix_models import CurrentAlgebra, MatrixAlgebra
from .poisson import PoissonAlgebra, f_from_log_monomials, psi0_density, psi_d_evaluate, psi_f_evaluate
from .psido import PsiDOAlgebra
from .report import CheckResult
from .scalars import QQ, PrimeField, field_from_spec, random_prime, rational_reconstruct

# regression constants (paired alternation, unnormalized Alt, rationals)
PSI3_AT_1_X_D = Fraction(-3)
PSI5_AT_1_X1_X2_D1_D2 = Fraction(-40)
PSI0_AT_1_P_Q = {1: Fraction(1), 2: Fraction(1), 3: Fraction(1)}
KAC_MOODY_CONSTANT = Fraction(2)


@dataclass
class SuiteConfig:
    suite: str
    n: int | None = None
    order: int | None = None
    samples: int | None = None
    seed: int = 0
    field: str | None = None
    jobs: int = dc_field(default_factory=default_jobs)
    format: str = "text"
    checkpoint: str | None = None

    def fld(self, default: str):
        return field_from_spec(self.field or default, self.seed)

    def count(self, default: int) -> int:
        return self.samples if self.samples is not None else default


def _res(check, status, seed=None, fld=None, floor=None, witness=None, t0=None, **details):
    ms = None if t0 is None else (time.perf_counter() - t0) * 1000.0
    return CheckResult(check, status, seed, getattr(fld, "name", fld), floor, witness, ms, details)


def _fmt(fld, v):
    return fld.format(v)


# -- shared closure machinery --------------------------------------------------

def schema_differentials(formula: LiftingFormula, alg, fam, tup, mode=None, jobs: int = 1) -> list:
    """d of each schema separately (coefficients included) at ``tup``."""
    mode = mode or formula.mode
    fld = alg.field
    k1 = len(tup)
    ins = [(i, j) for i in range(k1) for j in range(i + 1, k1)]
    ctxs: dict = {}

    def ctx(idx):
        c = ctxs.get(idx)
        if c is None:
            i, j = ins[idx]
            args = [alg.bracket(tup[i], tup[j])] + [a for t, a in enumerate(tup) if t not in (i, j)]
            c = ctxs[idx] = EvalContext(alg, fam, args)
        return c

    tasks = [(a, s) for a in range(len(ins)) for s in range(len(formula.schemas))]

    def run(t):
        a, s = tasks[t]
        i, j = ins[a]
        sch = formula.schemas[s]
        v = fld(sch.coeff) * schema_value(sch, ctx(a), mode)
        return -v if (i + j) % 2 else v

    vals = pmap(run, len(tasks), jobs)
    out = [fld.zero] * len(formula.schemas)
    for (a, s), v in zip(tasks, vals):
        out[s] += v
    return [v % fld.p if fld.p else v for v in out]


def closure_check(check: str, formula: LiftingFormula, alg, fam, tuples, seed, mode=None, jobs=1) -> CheckResult:
    """d(formula) = 0 on every tuple; counts tuples where some single schema has nonzero d."""
    fld = alg.field
    t0 = time.perf_counter()
    nontrivial = 0
    try:
        for idx, tup in enumerate(tuples):
            per = schema_differentials(formula, alg, fam, tup, mode, jobs)
            total = sum(per, fld.zero)
            total = total % fld.p if fld.p else total
            nontrivial += any(not fld.is_zero(v) for v in per)
            if not fld.is_zero(total):
                return _res(check, "fail", seed, fld, alg.working_floor,
                            {"tuple_index": idx, "value": _fmt(fld, total),
                             "args": [alg.format(a) for a in tup]}, t0,
                            tuples=idx + 1, mode=mode or formula.mode)
    except PrecisionInsufficient as exc:
        return _res(check, "precision", seed, fld, alg.working_floor, str(exc), t0)
    return _res(check, "pass", seed, fld, alg.working_floor, None, t0, tuples=len(tuples),
                nontrivial=nontrivial, mode=mode or formula.mode)


def _deep(alg: PsiDOAlgebra, tuples) -> PsiDOAlgebra:
    """Algebra whose working depth covers every tuple (printed as the floor)."""
    depth = max(max(alg.depth_for(t) for t in tuples), 2)
    return alg.with_depth(depth)


def _cochain(formula, alg, fam, mode=None, jobs=1) -> Cochain:
    return Cochain(formula.m, lambda *a: evaluate(formula, alg, fam, a, mode, jobs), True, formula.name)


def halfsum_convention(seed: int, samples: int = 5) -> CheckResult:
    """Ratio of the half-sum differential to the standard one on matrices.

    Test cochains are wedges of generic linear functionals, Alt prod Tr(M_i A_i),
    which are not closed in any arity.
    """
    t0 = time.perf_counter()
    M = MatrixAlgebra(3, QQ)
    rng = random.Random(seed)
    consts = {}
    ok = True
    for arity in (2, 3, 4):
        Ms = [M.sample(rng) for _ in range(arity)]

        def f(*args, Ms=Ms):
            out = QQ.one
            for m, a in zip(Ms, args):
                out *= sum(m[r][c] * a[c][r] for r in range(3) for c in range(3))
            return out

        psi = alternate(f, arity, QQ, f"wedge{arity}")
        tuples = [[M.sample(rng) for _ in range(arity + 1)] for _ in range(samples)]
        std = [ce_differential(psi, t, M) for t in tuples]
        half = [ce_differential_halfsum(psi, t, M) for t in tuples]
        c, good = solve_scale(half, std, QQ)
        ok &= good and c is not None
        consts[arity] = None if c is None else str(c)
    return _res("halfsum-vs-standard-differential", "pass" if ok else "fail", seed, QQ, None, None, t0,
                constants_by_arity=consts)


# -- lemma-1.1 -----------------------------------------------------------------

def suite_lemma_1_1(cfg: SuiteConfig) -> list:
    K = cfg.order or 8
    fld = cfg.fld("rational")
    A = PsiDOAlgebra(1, fld, K)
    out = []
    t0 = time.perf_counter()
    Q = A.q_element(1)
    want = {m: fld(Fraction(factorial(m - 1), m)) for m in range(1, K + 1)}
    got = {m: Q.terms.get(((-m,), (-m,)), fld.zero) for m in range(1, K + 1)}
    bad = [m for m in want if got[m] != want[m]]
    out.append(_res("lemma-1.1:q-coefficients", "fail" if bad or len(Q.terms) != K else "pass", cfg.seed, fld,
                    A.working_floor, {"m": bad[0]} if bad else None, t0,
                    coefficients=[fld.format(got[m]) for m in range(1, K + 1)]))
    fam = A.log_family()
    for name, g in (("x", A.x(1)), ("d", A.d(1))):
        t0 = time.perf_counter()
        lhs = A.bracket(Q, g)
        rhs = derivation_commutator(A, fam, 1, 2, g)
        diff = A.sub(lhs, rhs)
        ok = A.is_zero(diff) and all(f <= -K + 1 for f in diff.floor)
        out.append(_res(f"lemma-1.1:[Q,{name}]=[D1,D2]({name})", "pass" if ok else "fail", cfg.seed, fld,
                        diff.floor, None if ok else A.format(diff), t0))
    # closed form of the x case: -sum_m (m-1)! x^-m d^-m-1
    t0 = time.perf_counter()
    lhs = A.bracket(Q, A.x(1))
    closed = A.linear_combination([(fld(-factorial(m - 1)), A.monomial((-m,), (-m - 1,)))
                                   for m in range(1, K)])
    diff = A.sub(lhs, A.truncate(closed, lhs.floor))
    out.append(_res("lemma-1.1:[Q,x]-closed-form", "pass" if A.is_zero(diff) else "fail", cfg.seed, fld,
                    lhs.floor, None, t0))
    return out


# -- cond-i-iii ------------------------------------------------------------------

def suite_cond_i_iii(cfg: SuiteConfig) -> list:
    fld = cfg.fld("rational")
    out = []
    for n in ([cfg.n] if cfg.n else [1, 2]):
        A = PsiDOAlgebra(n, fld, cfg.order or 8)
        rng = random.Random(cfg.seed)
        mons = [A.sample_monomial(rng) for _ in range(cfg.count(50))]
        r = check_derivation_conditions(A, A.log_family(), len(mons), cfg.seed, mons)
        r.check = f"cond-i-iii(n={n})"
        out.append(r)
        r = check_trace_property(A, cfg.count(50), cfg.seed)
        r.check = f"trace-axiom(n={n})"
        out.append(r)
    return out


# -- thm-1.1 ---------------------------------------------------------------------

def _dif_tuples(A, rng, count, size, a_range=(0, 2), b_range=(0, 2), extra=1):
    return [A.balanced_tuple(rng, size, a_range, b_range, extra_terms=extra) for _ in range(count)]


def _replay(check, lhs_formula, rhs_formula, A, fam, tuples, seed, lhs_order=None, jobs=1) -> CheckResult:
    """d(lhs)(reordered args) = c * rhs(args) with one solved constant c."""
    psi = _cochain(lhs_formula, A, fam, jobs=jobs)
    order = lhs_order or (lambda t: t)
    r = verify_identity(lambda t: ce_differential(psi, order(t), A),
                        lambda t: evaluate(rhs_formula, A, fam, t, jobs=jobs),
                        tuples, A.field, check, solve_constant=True, seed=seed, floor=A.working_floor)
    return r


def _last_first(t):
    return [t[-1]] + list(t[:-1])


def suite_thm_1_1(cfg: SuiteConfig) -> list:
    fld = cfg.fld("rational")
    out = [halfsum_convention(cfg.seed)]
    A0 = PsiDOAlgebra(1, fld, 4)
    t0 = time.perf_counter()
    A = A0.with_depth(A0.depth_for([A0.one(), A0.x(1), A0.d(1)]))
    fam = A.log_family()
    v = evaluate(psi3(), A, fam, [A.one(), A.x(1), A.d(1)])
    want = fld(PSI3_AT_1_X_D)
    out.append(_res("thm-1.1:psi3(1,x,d)", "pass" if v == want and not fld.is_zero(v) else "fail", cfg.seed,
                    fld, A.working_floor, None, t0, value=fld.format(v), regression=str(PSI3_AT_1_X_D)))

    rng = random.Random(cfg.seed)
    tuples = _dif_tuples(A0, rng, cfg.count(20), 4)
    A = _deep(A0, tuples)
    fam = A.log_family()
    out.append(closure_check("thm-1.1:d(psi3)=0", psi3(), A, fam, tuples, cfg.seed, jobs=cfg.jobs))

    # generated n=1 formula against the theorem's formula
    t0 = time.perf_counter()
    triples = _dif_tuples(A0, rng, 8, 3, extra=1)
    A3 = _deep(A0, triples)
    f3 = A3.log_family()
    r = verify_identity(lambda t: evaluate(generate_lifting_formula(1), A3, f3, t),
                        lambda t: evaluate(psi3(), A3, f3, t), triples, fld, "generator(n=1)~psi3",
                        solve_constant=True, seed=cfg.seed, floor=A3.working_floor)
    out.append(r)

    # trace kills the derivation, via the Leibniz expansion: -2 Alt Tr(D1A1 D2A2 A3 A4) + Alt Tr([Q,A1] A2 A3 A4) = 0
    quads = _dif_tuples(A0, rng, 8, 4)
    A4 = _deep(A0, quads)
    f4 = A4.log_family()
    alpha = loads("-2 * D1[A1] D2[A2] A3 A4\n", "paired", "alpha")
    beta = loads("1 * Q12 A1 A2 A3 A4\n-1 * A1 Q12 A2 A3 A4\n", "fixed", "beta")
    r = verify_identity(lambda t: evaluate(alpha, A4, f4, t), lambda t: fld(-1) * evaluate(beta, A4, f4, t),
                        quads, fld, "cor-1.2:alpha+beta=0", seed=cfg.seed, floor=A4.working_floor)
    r.details["nonzero_alpha"] = sum(not fld.is_zero(evaluate(alpha, A4, f4, t)) for t in quads)
    out.append(r)
    out.append(_trace_kills_direct(A4, f4, quads, cfg.seed))

    # coboundary identities with solved constants, d taken at (A4, A1, A2, A3)
    lift_a = loads("-2 * D1[A1] D2[A2] A3\n", "paired", "a")
    lift_b = loads("-2 * Q12 A1 A2 A3\n", "fixed", "b")
    out.append(_replay("lemma-1.3(i)", lift_a, alpha, A4, f4, quads, cfg.seed, _last_first))
    out.append(_replay("lemma-1.3(ii)", lift_b, beta, A4, f4, quads, cfg.seed, _last_first))
    return out


def _trace_kills_direct(A, fam, tuples, seed) -> CheckResult:
    """Alt_{A,D} Tr(D1(D2 A1 A2 A3 A4)) computed term by term."""
    fld = A.field
    t0 = time.perf_counter()
    for idx, t in enumerate(tuples):
        total = fld.zero
        for perm in itertools.permutations(range(4)):
            s = perm_sign(perm)
            for (d1, d2), ls in (((1, 2), 1), ((2, 1), -1)):
                prod = A.product([fam.apply(d2, t[perm[0]])] + [t[perm[k]] for k in (1, 2, 3)])
                total += s * ls * A.trace(fam.apply(d1, prod))
        if not fld.is_zero(total):
            return _res("cor-1.2:direct", "fail", seed, fld, A.working_floor,
                        {"tuple_index": idx, "value": fld.format(total)}, t0)
    return _res("cor-1.2:direct", "pass", seed, fld, A.working_floor, None, t0, tuples=len(tuples))


# -- thm-1.5 ---------------------------------------------------------------------

def suite_thm_1_5(cfg: SuiteConfig) -> list:
    i = cfg.n or 2
    fld = cfg.fld("random-prime")
    f = psi_tilde(i)
    out = []
    A0 = PsiDOAlgebra(1, fld, 4)
    rng = random.Random(cfg.seed)
    # differential operators of order <= 1 (polynomial coefficients, a few terms each)
    low = [[A0.sample_differential(rng, degree=1, max_terms=3) for _ in range(f.m + 1)]
           for _ in range(cfg.count(10))]
    A = _deep(A0, low)
    out.append(closure_check(f"thm-1.5:d(psi_tilde({i}))=0:order<=1", f, A, A.log_family(), low, cfg.seed,
                             jobs=cfg.jobs))
    # weight-balanced sums of d-order <= 2, where single schemas have nonzero d
    rich = [A0.balanced_tuple(rng, f.m + 1, (0, 3), (0, 2), extra_terms=2) for _ in range(cfg.count(10))]
    A = _deep(A0, rich)
    out.append(closure_check(f"thm-1.5:d(psi_tilde({i}))=0:order<=2-balanced", f, A, A.log_family(), rich,
                             cfg.seed, jobs=cfg.jobs))
    return out


# -- thm-3.1 ---------------------------------------------------------------------

def suite_thm_3_1(cfg: SuiteConfig) -> list:
    out = []
    t0 = time.perf_counter()
    gen, tr = generate_lifting_formula(2), psi5()
    out.append(_res("thm-3.1:generator(2)==transcription", "pass" if gen.multiset() == tr.multiset() else "fail",
                    cfg.seed, None, None, None, t0, schemas=len(gen.schemas)))
    A0 = PsiDOAlgebra(2, QQ, 4)
    pt = [A0.one(), A0.x(1), A0.x(2), A0.d(1), A0.d(2)]
    A = A0.with_depth(A0.depth_for(pt))
    t0 = time.perf_counter()
    v = evaluate(tr, A, A.log_family(), pt, jobs=cfg.jobs)
    out.append(_res("thm-3.1:psi5(1,x1,x2,d1,d2)", "pass" if v == PSI5_AT_1_X1_X2_D1_D2 else "fail", cfg.seed,
                    QQ, A.working_floor, None, t0, value=str(v), regression=str(PSI5_AT_1_X1_X2_D1_D2)))

    fld = cfg.fld("random-prime")
    B0 = PsiDOAlgebra(2, fld, 4)
    rng = random.Random(cfg.seed)
    tuples = [B0.balanced_tuple(rng, 6, (0, 2), (0, 1)) for _ in range(cfg.count(5))]
    B = _deep(B0, tuples)
    fam = B.log_family()
    out.append(closure_check("thm-3.1:d(psi5)=0", tr, B, fam, tuples, cfg.seed, jobs=cfg.jobs))
    out.append(mode_adjudication(tr, B, fam, tuples, cfg.seed, cfg.jobs))
    return out


def mode_adjudication(formula, alg, fam, tuples, seed, jobs=1) -> CheckResult:
    """Which alternation modes make d(formula) vanish on the first nontrivial tuple."""
    fld = alg.field
    t0 = time.perf_counter()
    verdict = {}
    for tup in tuples:
        per = {m: schema_differentials(formula, alg, fam, tup, m, jobs) for m in ("paired", "relabel", "fixed")}
        if not any(any(not fld.is_zero(v) for v in vals) for vals in per.values()):
            continue
        for m, vals in per.items():
            s = sum(vals, fld.zero)
            verdict[m] = fld.format(s % fld.p if fld.p else s)
        break
    closed = [m for m, v in verdict.items() if v == "0"]
    ok = closed == ["paired"]
    return _res("alternation-mode-adjudication", "pass" if ok else "fail", seed, fld, alg.working_floor,
                None, t0, d_by_mode=verdict, closed_modes=closed, default="paired")


# -- Poisson suites ----------------------------------------------------------------

def suite_lemma_2_5(cfg: SuiteConfig) -> list:
    fld = cfg.fld("rational")
    out = []
    for n in ([cfg.n] if cfg.n else [1, 2]):
        P = PoissonAlgebra(n, fld)
        r = check_trace_property(P, cfg.count(100), cfg.seed)
        r.check = f"lemma-2.5:Tr{{f,g}}=0(n={n})"
        out.append(r)
        rng = random.Random(cfg.seed)
        t0 = time.perf_counter()
        bad = None
        for _ in range(cfg.count(100) // 4):
            f, g, h = P.sample(rng), P.sample(rng), P.sample(rng)
            jac = P.linear_combination([
                (fld.one, P.poisson_bracket(f, P.poisson_bracket(g, h))),
                (fld.one, P.poisson_bracket(g, P.poisson_bracket(h, f))),
                (fld.one, P.poisson_bracket(h, P.poisson_bracket(f, g))),
            ])
            anti = P.add(P.poisson_bracket(f, g), P.poisson_bracket(g, f))
            if jac or anti:
                bad = [P.format(f), P.format(g), P.format(h)]
                break
        out.append(_res(f"poisson-jacobi-antisymmetry(n={n})", "fail" if bad else "pass", cfg.seed, fld, None,
                        bad, t0))
    return out


def _poisson_tuples(P, rng, count, size, extra_k=True):
    n = P.n
    out = []
    for _ in range(count):
        target = [1] * (2 * n)
        if extra_k:
            k = rng.randrange(n)
            target[k] += 1
            target[n + k] += 1
        out.append(P.balanced_tuple(rng, size, target, lo=-1, hi=2))
    return out


def _insertion_closure(check, psi, alg, tuples, seed, **extra) -> CheckResult:
    """d(psi) = 0 with the bracket insertions kept apart to count nontrivial tuples."""
    fld = alg.field
    t0 = time.perf_counter()
    nontrivial = 0
    for idx, t in enumerate(tuples):
        total, hit = fld.zero, False
        for i in range(len(t)):
            for j in range(i + 1, len(t)):
                v = psi(alg.bracket(t[i], t[j]), *[a for k, a in enumerate(t) if k not in (i, j)])
                hit |= not fld.is_zero(v)
                total = total - v if (i + j) % 2 else total + v
        nontrivial += hit
        if not fld.is_zero(total):
            return _res(check, "fail", seed, fld, None, {"tuple_index": idx, "value": fld.format(total)}, t0,
                        **extra)
    return _res(check, "pass", seed, fld, None, None, t0, tuples=len(tuples), nontrivial=nontrivial, **extra)


def suite_lemma_2_7(cfg: SuiteConfig) -> list:
    fld = cfg.fld("rational")
    out = []
    for n in ([cfg.n] if cfg.n else [1, 2, 3]):
        P = PoissonAlgebra(n, fld)
        rng = random.Random(cfg.seed + n)
        t0 = time.perf_counter()
        while True:
            ds = [P.sample_monomial(rng, -2, 2) for _ in range(2 * n)]
            F = f_from_log_monomials(P, ds)
            if F:
                break
        psi = Cochain(2 * n + 1, lambda *a, F=F, P=P: psi_f_evaluate(P, F, list(a)), True, "psiF")
        tuples = _poisson_tuples(P, rng, cfg.count(10), 2 * n + 2)
        out.append(_insertion_closure(f"lemma-2.7:d(psiF)=0(n={n})", psi, P, tuples, cfg.seed, F=P.format(F)))
        # log-monomial route: {ln D, f} products against the F form
        t0 = time.perf_counter()
        args = _poisson_tuples(P, rng, 5, 2 * n + 1, extra_k=False)
        r = verify_identity(lambda t: psi_d_evaluate(P, ds, t), lambda t: psi_f_evaluate(P, F, t), args, fld,
                            f"lemma-2.7:psiD=psiF(n={n})", seed=cfg.seed)
        r.details["nonzero"] = sum(not fld.is_zero(psi_f_evaluate(P, F, t)) for t in args)
        out.append(r)
    return out


def suite_lemma_2_8(cfg: SuiteConfig) -> list:
    fld = cfg.fld("rational")
    out = []
    for n in ([cfg.n] if cfg.n else [1, 2, 3]):
        P = PoissonAlgebra(n, fld)
        t0 = time.perf_counter()
        v = psi_f_evaluate(P, psi0_density(P), [P.one()] + P.generators())
        want = fld(PSI0_AT_1_P_Q[n]) if n in PSI0_AT_1_P_Q else None
        ok = not fld.is_zero(v) and (want is None or v == want)
        out.append(_res(f"lemma-2.8(ii):psi0(1,p,q)(n={n})", "pass" if ok else "fail", cfg.seed, fld, None, None,
                        t0, value=fld.format(v)))
    out.append(_res("lemma-2.8(i)", "skip", cfg.seed, fld, None, None, None,
                    reason="needs the deformation map Poiss -> PsiDif, for which no formula is available"))
    return out


# -- kac-moody ---------------------------------------------------------------------

def suite_kac_moody(cfg: SuiteConfig) -> list:
    fld = cfg.fld("rational")
    out = []
    C = CurrentAlgebra(cfg.n or 2, 1, fld)
    fam = C.derivation_family()
    t0 = time.perf_counter()
    f = chain_lift(DerivationChain([(1, (1,))], fam), C)
    out.append(_res("lemma-2.2:lift(d/dt)", "pass" if f.dumps() == "1 * D1[A1] A2\n" else "fail", cfg.seed, fld,
                    None, None, t0, formula=f.dumps().strip()))
    t0 = time.perf_counter()
    lhs, rhs, stray = [], [], []
    units = C.mat.generators()
    for E, F in itertools.product(units, repeat=2):
        for a, b in itertools.product(range(-3, 4), repeat=2):
            v = evaluate(f, C, fam, [C.current(E, a), C.current(F, b)])
            if a + b:
                if not fld.is_zero(v):
                    stray.append((C.mat.format(E), a, C.mat.format(F), b))
            else:
                lhs.append(v)
                rhs.append(fld(a) * C.mat.trace(C.mat.mul(E, F)))
    c, ok = solve_scale(lhs, rhs, fld)
    ok = ok and not stray and c is not None and c == fld(KAC_MOODY_CONSTANT)
    out.append(_res("kac-moody:psi2(Et^a,Ft^b)=c*a*Tr(EF)*[a+b=0]", "pass" if ok else "fail", cfg.seed, fld, None,
                    stray[:1] or None, t0, constant=None if c is None else fld.format(c),
                    regression=str(KAC_MOODY_CONSTANT)))
    psi = _cochain(f, C, fam)
    rng = random.Random(cfg.seed)
    r = is_cocycle(psi, C, lambda g: C.sample(g, 2, -2, 2), cfg.count(20), cfg.seed, check="kac-moody:d(psi2)=0")
    out.append(r)
    C2 = CurrentAlgebra(2, 2, fld)
    fam2 = C2.derivation_family()
    f2 = chain_lift(DerivationChain([(1, (1, 2))], fam2), C2)
    r = is_cocycle(_cochain(f2, C2, fam2), C2, lambda g: C2.sample(g, 2, -2, 2), cfg.count(20), cfg.seed,
                   check="lemma-2.2:d(lift(d/dt1^d/dt2))=0")
    out.append(r)
    A = PsiDOAlgebra(1, fld, 8)
    t0 = time.perf_counter()
    try:
        chain_lift(DerivationChain([(1, (1, 2))], A.log_family()), A, [A.x(1), A.d(1)])
        status = "fail"
    except NotACycle:
        status = "pass"
    out.append(_res("lemma-2.2:ln(d)^ln(x)-not-a-cycle", status, cfg.seed, fld, A.working_floor, None, t0))
    return out


# -- lemma-3.2-3.4 and eq-16 -------------------------------------------------------

_L32 = [
    ("lemma-3.2(i)", "1 * D1[A1] A2 A3 D2[A4] Q12 A5", "1 * D1[A1] A2 A3 D2[A6] A4 Q12 A5", "paired"),
    ("lemma-3.2(ii)", "1 * D1[A1] D2[A2] A3 A4 Q12 A5", "1 * D1[A1] D2[A6] A2 A3 A4 Q12 A5", "paired"),
    ("lemma-3.2(iii)", "1 * D1[A1] D2[A2] A3 A4 Q12 A5", "1 * D1[A1] D2[A2] A3 Q12 A6 A4 A5", "paired"),
    ("lemma-3.3(i)", "1 * D1[A1] A2 A3 A4 D2[A5] Q12",
     "1 * D1[A6] A1 A2 A3 A4 D2[A5] Q12\n-1 * D1[A1] A2 A3 A4 D2[A5] A6 Q12\n1 * D1[A1] A2 A3 A4 D2[A5] Q12 A6",
     "paired"),
    ("lemma-3.3(ii)", "1 * D1[A1] A2 D2[A3] A4 A5 Q12",
     "1 * D1[A6] A1 A2 D2[A3] A4 A5 Q12\n-1 * D1[A1] A2 D2[A3] A4 A5 A6 Q12\n1 * D1[A1] A2 D2[A3] A4 A5 Q12 A6",
     "paired"),
    ("lemma-3.3(iii)", "1 * D1[A1] A2 D2[A3] Q12 A4 A5",
     "1 * D1[A6] A1 A2 D2[A3] Q12 A4 A5\n-1 * D1[A1] A2 D2[A3] A6 Q12 A4 A5\n1 * D1[A1] A2 D2[A3] Q12 A6 A4 A5",
     "paired"),
]
_L34 = [
    ("lemma-3.4(i)", "1 * D1[A1] D2[A2] D3[A3] D4[A4] A5", "paired", "1 * D1[A1] D2[A2] D3[A3] D4[A4] A5 A6",
     "paired"),
    ("lemma-3.4(ii)", "1 * Q12 Q34 A1 A2 A3 A4 A5", "paired", "-1 * Q12 Q34 A1 A2 A3 A4 A5 A6", "fixed"),
    ("lemma-3.4(iii)", "1 * Q12 A1 Q34 A2 A3 A4 A5", "paired", "1 * Q12 A6 A1 Q34 A2 A3 A4 A5", "paired"),
]


def suite_lemma_3_2_3_4(cfg: SuiteConfig) -> list:
    fld = cfg.fld("random-prime")
    out = [halfsum_convention(cfg.seed)]
    rng = random.Random(cfg.seed)
    A0 = PsiDOAlgebra(1, fld, 4)
    tuples = [A0.balanced_tuple(rng, 6, (0, 3), (0, 2)) for _ in range(cfg.count(4))]
    A = _deep(A0, tuples)
    fam = A.log_family()
    for name, lhs, rhs, mode in _L32:
        out.append(_replay(name, loads(lhs + "\n", mode), loads(rhs + "\n", mode), A, fam, tuples, cfg.seed,
                           _last_first, cfg.jobs))
    B0 = PsiDOAlgebra(2, fld, 4)
    tuples = [B0.balanced_tuple(rng, 6, (0, 2), (0, 1)) for _ in range(cfg.count(4))]
    B = _deep(B0, tuples)
    fam = B.log_family()
    for name, lhs, lm, rhs, rm in _L34:
        out.append(_replay(name, loads(lhs + "\n", lm), loads(rhs + "\n", rm), B, fam, tuples, cfg.seed,
                           _last_first, cfg.jobs))
    return out


def suite_eq_16(cfg: SuiteConfig) -> list:
    fld = cfg.fld("random-prime")
    rng = random.Random(cfg.seed)
    B0 = PsiDOAlgebra(2, fld, 4)
    tuples = [B0.balanced_tuple(rng, 6, (0, 2), (0, 1)) for _ in range(cfg.count(5))]
    B = _deep(B0, tuples)
    fam = B.log_family()
    out = [closure_check("eq-16:d(psi5_tilde)=0", psi5_tilde(), B, fam, tuples, cfg.seed, jobs=cfg.jobs)]
    out[-1].details["note"] = "E1,E2,E3,I-IV are traces of derivations, zero by condition (i)"
    # exploratory: is psi5_tilde a multiple of psi5 on samples?
    args = [B0.balanced_tuple(rng, 5, (0, 2), (0, 1)) for _ in range(cfg.count(5))]
    Bv = _deep(B0, args)
    fv = Bv.log_family()
    r = verify_identity(lambda t: evaluate(psi5_tilde(), Bv, fv, t, jobs=cfg.jobs),
                        lambda t: evaluate(psi5(), Bv, fv, t, jobs=cfg.jobs), args, fld,
                        "eq-16:psi5_tilde~c*psi5", solve_constant=True, seed=cfg.seed, floor=Bv.working_floor)
    r.status = "info"
    out.append(r)
    return out


# -- inner derivations -----------------------------------------------------------

_INNER_SAMPLES = {1: 5, 2: 5, 3: 2}


def suite_lemma_4_2(cfg: SuiteConfig) -> list:
    fld = cfg.fld("random-prime")
    out = []
    for n in ([cfg.n] if cfg.n else [1, 2, 3]):
        M = MatrixAlgebra(3, fld)
        res = inner_expansion_check(n, M, sample_count=cfg.count(_INNER_SAMPLES.get(n, 2)), seed=cfg.seed,
                                    closure_samples=0, jobs=cfg.jobs)
        out += res
        if res[0].status == "info":
            # alpha is identically zero on 3x3 from n=3 on; measure k where it is not
            out += inner_expansion_check(n, MatrixAlgebra(4, fld), sample_count=cfg.count(_INNER_SAMPLES.get(n, 2)),
                                         seed=cfg.seed, closure_samples=0, jobs=cfg.jobs, label=",4x4")
        if n <= 2:
            out.append(alpha_coboundary_check(n, M, sample_count=4, seed=cfg.seed))
    return out


def suite_cor_4_3(cfg: SuiteConfig) -> list:
    fld = cfg.fld("random-prime")
    out = []
    for n in ([cfg.n] if cfg.n else [1, 2, 3]):
        count = cfg.count(_INNER_SAMPLES.get(n, 2))
        res = inner_expansion_check(n, MatrixAlgebra(3, fld), sample_count=0, seed=cfg.seed,
                                    closure_samples=count, jobs=cfg.jobs)
        out += res
        if res[0].status == "info":
            out += inner_expansion_check(n, MatrixAlgebra(4, fld), sample_count=0, seed=cfg.seed,
                                         closure_samples=count, jobs=cfg.jobs, label=",4x4")
    return out


# -- generator cross-checks ----------------------------------------------------------

def suite_generator(cfg: SuiteConfig) -> list:
    out = []
    t0 = time.perf_counter()
    bad = [(n, N) for n in range(1, 7) for N in range(1, n + 1)
           if not len(enumerate_marked_intervals(n, N)) == brute_force_interval_count(n, N) == comb(2 * n - N, N)]
    out.append(_res("interval-counts(n<=6)", "fail" if bad else "pass", cfg.seed, None, None, bad or None, t0))
    t0 = time.perf_counter()
    ok = generate_lifting_formula(2).multiset() == psi5().multiset()
    out.append(_res("generator(2)==transcription", "pass" if ok else "fail", cfg.seed, None, None, None, t0))
    t0 = time.perf_counter()
    g3 = generate_lifting_formula(3)
    by_q = [sum(s.q_degree == k for s in g3.schemas) for k in range(4)]
    ok = len(g3.schemas) == 13 and by_q == [1, 5, 6, 1]
    out.append(_res("generator(3)-shapes", "pass" if ok else "fail", cfg.seed, None, None, None, t0,
                    schemas=len(g3.schemas), by_q_degree=by_q))
    return out


# -- conjecture-n3 -------------------------------------------------------------------

def suite_conjecture_n3(cfg: SuiteConfig) -> list:
    """d(psi7) on PsiDif_3 monomial 8-tuples over two primes, resumable."""
    n = cfg.n or 3
    f = generate_lifting_formula(n)
    path = cfg.checkpoint or f"conjecture-n{n}-seed{cfg.seed}.ckpt.json"
    state = {}
    if os.path.exists(path):
        with open(path) as fh:
            state = json.load(fh)
    out = []
    primes = [random_prime(cfg.seed), random_prime(cfg.seed + 1)] if not cfg.field or cfg.field == "random-prime" \
        else [cfg.fld("random-prime").p]
    for p in primes:
        fld = PrimeField(p)
        A0 = PsiDOAlgebra(n, fld, 4)
        rng = random.Random(cfg.seed)
        tuples = [A0.balanced_tuple(rng, 2 * n + 2, (0, 1), (0, 1)) for _ in range(cfg.count(2))]
        A = _deep(A0, tuples)
        fam = A.log_family()
        t0 = time.perf_counter()
        status, witness, nontrivial = "pass", None, 0
        for ti, tup in enumerate(tuples):
            k1 = len(tup)
            ins = [(i, j) for i in range(k1) for j in range(i + 1, k1)]
            per = [fld.zero] * len(f.schemas)
            for a, (i, j) in enumerate(ins):
                args = [A.bracket(tup[i], tup[j])] + [x for t, x in enumerate(tup) if t not in (i, j)]
                ctx = EvalContext(A, fam, args)
                for s, sch in enumerate(f.schemas):
                    key = f"{p}:{ti}:{a}:{s}"
                    if key not in state:
                        K = max(cfg.jobs, 1)
                        parts = pmap(lambda k: schema_value(sch, ctx, "paired", (k, K)), K, cfg.jobs)
                        v = fld(sch.coeff) * sum(parts, fld.zero)
                        state[key] = int((-v if (i + j) % 2 else v) % p)
                        with open(path + ".tmp", "w") as fh:
                            json.dump(state, fh)
                        os.replace(path + ".tmp", path)
                        print(f"[heartbeat] p={p} tuple={ti} insertion={a + 1}/{len(ins)} schema={s + 1}/"
                              f"{len(f.schemas)} elapsed={time.perf_counter() - t0:.0f}s", file=sys.stderr,
                              flush=True)
                    per[s] += state[key]
            nontrivial += any(v % p for v in per)
            total = sum(per) % p
            if total:
                status, witness = "fail", {"tuple_index": ti, "value": fld.format(total)}
                break
        out.append(_res(f"conjecture-n{n}:d(psi{2 * n + 1})=0", status, cfg.seed, fld, A.working_floor, witness,
                        t0, tuples=len(tuples), nontrivial=nontrivial, checkpoint=path))
    return out


SUITES: dict[str, Callable[[SuiteConfig], list]] = {
    "lemma-1.1": suite_lemma_1_1,
    "thm-1.1": suite_thm_1_1,
    "thm-1.5": suite_thm_1_5,
    "cond-i-iii": suite_cond_i_iii,
    "lemma-2.5": suite_lemma_2_5,
    "lemma-2.7": suite_lemma_2_7,
    "lemma-2.8": suite_lemma_2_8,
    "kac-moody": suite_kac_moody,
    "thm-3.1": suite_thm_3_1,
    "lemma-3.2-3.4": suite_lemma_3_2_3_4,
    "eq-16": suite_eq_16,
    "lemma-4.2": suite_lemma_4_2,
    "cor-4.3": suite_cor_4_3,
    "generator": suite_generator,
    "conjecture-n3": suite_conjecture_n3,
}
OPT_IN = {"conjecture-n3"}
DEFAULT_SUITES = [s for s in SUITES if s not in OPT_IN]


def run_suite(cfg: SuiteConfig) -> list:
    if cfg.suite == "all":
        out = []
        for name in DEFAULT_SUITES:
            out += SUITES[name](SuiteConfig(**{**cfg.__dict__, "suite": name}))
        return out
    try:
        fn = SUITES[cfg.suite]
    except KeyError:
        raise UnknownSuite(cfg.suite) from None
    return fn(cfg)
