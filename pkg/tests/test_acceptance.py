"""Acceptance criteria, one test (and one printed line) each.

Every identity is checked with exact equality, over the rationals or over a
seeded random prime.  Run directly (``python tests/test_acceptance.py``) or
through pytest, where the lines are collected into the terminal summary.
Criterion 10 is opt-in: set LIFTCOCYCLE_ACCEPT_N3=1.
"""
from __future__ import annotations

import os
import sys
import time
from fractions import Fraction
from math import comb, factorial

import pytest

from liftcocycle.lifting import evaluate, generate_lifting_formula, psi3, psi5
from liftcocycle.lifting.inner import choice_vectors, rl_positions
from liftcocycle.poisson import PoissonAlgebra, psi0_density, psi_f_evaluate
from liftcocycle.psido import PsiDOAlgebra
from liftcocycle.suites import SUITES, SuiteConfig

sys.path.insert(0, os.path.dirname(__file__))
from oracles import count_gapped_subsets, naive_evaluate  # noqa: E402

TOL = "exact"
LINES: list[str] = []


def _run(*suites, **cfg):
    t0 = time.perf_counter()
    out = []
    for name in suites:
        out += SUITES[name](SuiteConfig(name, jobs=1, **cfg))
    return out, time.perf_counter() - t0


def _by_name(results, prefix):
    return [r for r in results if r.check.startswith(prefix)]


def _record(num, title, problems, secs, limit, extra=""):
    if secs > limit:
        problems.append(f"runtime {secs:.1f}s over {limit}s")
    status = "PASS" if not problems else "FAIL"
    line = f"[{status}] criterion {num}: {title}  tol={TOL}  {secs:.1f}s/<{limit}s"
    if extra:
        line += f"  {extra}"
    if problems:
        line += "  problems=" + "; ".join(problems)
    LINES.append(line)
    print(line)
    return not problems


def _not_passed(results):
    return [f"{r.check}={r.status}" for r in results if r.status != "pass"]


def test_criterion_1_q_series():
    res, secs = _run("lemma-1.1")
    problems = _not_passed(res)
    q = PsiDOAlgebra(1, depth=8).q_element(1)
    oracle = [Fraction(factorial(m - 1), m) for m in range(1, 9)]
    if [q.terms[((-m,), (-m,))] for m in range(1, 9)] != oracle:
        problems.append("coefficients differ from (m-1)!/m")
    if any(r.floor is not None and min(r.floor) > -7 for r in res):
        problems.append("bracket checked above a floor shallower than -7")
    assert _record(1, "Q series coefficients and [Q,g] = [D1,D2](g)", problems, secs, 1.0,
                   f"coefficients={[str(c) for c in oracle]}")


def test_criterion_2_conditions():
    res, secs = _run("cond-i-iii")
    problems = _not_passed(res)
    for n in (1, 2):
        r = _by_name(res, f"cond-i-iii(n={n})")
        if not r or r[0].details.get("samples", 0) < 50:
            problems.append(f"n={n} sampled fewer than 50 elements")
    assert _record(2, "conditions (i)-(iii) for log derivations, n=1,2", problems, secs, 10.0)


def test_criterion_3_psi3():
    res, secs = _run("thm-1.1")
    problems = _not_passed(res)
    d = _by_name(res, "thm-1.1:d(psi3)=0")[0]
    if d.details["tuples"] < 20 or d.field != "rational":
        problems.append("closure needs >= 20 rational tuples")
    A = PsiDOAlgebra(1, depth=4)
    args = [A.one(), A.x(), A.d()]
    value = evaluate(psi3(), A, A.log_family(), args)
    oracle = naive_evaluate(psi3(), A, A.log_family(), args)
    if value != oracle or value != -3 or value == 0:
        problems.append(f"psi3(1,x,d)={value}, oracle {oracle}, pinned -3")
    assert _record(3, "d(psi3)=0 and psi3(1,x,d) != 0", problems, secs, 30.0,
                   f"psi3(1,x,d)={value} nontrivial={d.details['nontrivial']}/{d.details['tuples']}")


def test_criterion_4_psi_tilde():
    res, secs = _run("thm-1.5", n=2)
    low = _by_name(res, "thm-1.5:d(psi_tilde(2))=0:order<=1")
    problems = _not_passed(res)
    if not low or low[0].details["tuples"] < 10 or not low[0].field.startswith("mod:"):
        problems.append("need >= 10 order<=1 tuples over a prime field")
    rich = _by_name(res, "thm-1.5:d(psi_tilde(2))=0:order<=2")
    extra = (f"order<=1 nontrivial={low[0].details['nontrivial']}/{low[0].details['tuples']} (vacuous: "
             f"weights of order<=1 monomials cannot balance); order<=2 nontrivial="
             f"{rich[0].details['nontrivial']}/{rich[0].details['tuples']}")
    assert _record(4, "d(psi_tilde_5)=0 on order<=1 6-tuples", problems, secs, 300.0, extra)


def test_criterion_5_psi5():
    res, secs = _run("thm-3.1", samples=5)
    problems = _not_passed(res)
    B = PsiDOAlgebra(2, depth=2)
    args = [B.one(), B.x(1), B.x(2), B.d(1), B.d(2)]
    value = evaluate(psi5(), B, B.log_family(), args)
    if value != -40:
        problems.append(f"psi5(1,x1,x2,d1,d2)={value}, pinned -40")
    d = _by_name(res, "thm-3.1:d(psi5)=0")[0]
    if d.details["tuples"] < 5 or not d.field.startswith("mod:"):
        problems.append("closure needs >= 5 prime-field tuples")
    mode = _by_name(res, "alternation-mode-adjudication")[0].details["closed_modes"]
    assert _record(5, "psi5(1,x1,x2,d1,d2) != 0 and d(psi5)=0", problems, secs, 1800.0,
                   f"value={value} nontrivial={d.details['nontrivial']}/{d.details['tuples']} closed_modes={mode}")


def test_criterion_6_poisson():
    res, secs = _run("lemma-2.5", "lemma-2.7", "lemma-2.8")
    problems = [p for p in _not_passed(res) if not p.startswith("lemma-2.8(i)=skip")]
    for n in (1, 2):
        r = _by_name(res, f"lemma-2.5:Tr{{f,g}}=0(n={n})")[0]
        if r.details["pairs"] < 100:
            problems.append(f"lemma 2.5 n={n} under 100 pairs")
    for n in (1, 2, 3):
        r = _by_name(res, f"lemma-2.7:d(psiF)=0(n={n})")[0]
        if r.details["tuples"] < 10:
            problems.append(f"closure n={n} under 10 tuples")
        P = PoissonAlgebra(n)
        args = [P.one()] + [P.p(i) for i in range(1, n + 1)] + [P.q(i) for i in range(1, n + 1)]
        if psi_f_evaluate(P, psi0_density(P), args) == 0:
            problems.append(f"psi0 vanishes at (1,p,q) for n={n}")
    assert _record(6, "Poisson trace, closure of psi_F (n=1,2,3), psi0 nonvanishing", problems, secs, 60.0)


def test_criterion_7_kac_moody():
    res, secs = _run("kac-moody")
    problems = _not_passed(res)
    pairing = _by_name(res, "kac-moody:psi2")[0]
    # by hand: Res Tr(a E t^(a-1) F t^b) - Res Tr(b F t^(b-1) E t^a) = (a - b) Tr(EF) when a + b = 0
    if pairing.details.get("constant") != "2":
        problems.append(f"constant {pairing.details.get('constant')} != 2")
    closed = _by_name(res, "kac-moody:d(psi2)=0")[0]
    if closed.details["tuples"] < 20:
        problems.append("closure under 20 triples")
    assert _record(7, "lift of d/dt is the Kac-Moody pairing and is closed", problems, secs, 10.0,
                   f"constant={pairing.details.get('constant')}")


def _k_oracle(n):
    # vectors with no RL spot are L^j R^(2n-j); each is a rotation of alpha
    return sum(1 for v in choice_vectors(n) if not rl_positions(v))


def _companion(res, rec):
    """The 4x4 rerun of a record that was vacuous on 3x3 matrices."""
    name = rec.check.replace(")", ",4x4)", 1)
    alt = [r for r in res if r.check == name]
    return alt[0] if alt else None


@pytest.mark.parametrize("n", [1, 2, 3])
def test_criterion_8_inner(n):
    res, secs = _run("lemma-4.2", "cor-4.3", n=n)
    problems, notes = [], []
    for r in res:
        if r.check.endswith(",4x4)") or r.status == "pass":
            continue
        alt = _companion(res, r) if r.status == "info" else None
        if alt is not None and alt.status == "pass":
            notes.append(f"{r.check} vacuous on 3x3 ({r.details.get('reason')}); 4x4 rerun passes")
        else:
            problems.append(f"{r.check}={r.status}")
    rec = _by_name(res, f"k-split(n={n})")[0]
    k_rec = _companion(res, rec) if rec.status == "info" else rec
    k = None if k_rec is None else k_rec.details["k"]
    if k != str(_k_oracle(n)) or _k_oracle(n) != 2 * n + 1:
        problems.append(f"k={k}, oracle {_k_oracle(n)}")
    need = 5 if n < 3 else 2
    for name in (f"k-split(n={n})", f"lemma-4.2(n={n})"):
        if _by_name(res, name)[0].details["samples"] < need:
            problems.append(f"{name} under {need} samples")
    if _by_name(res, f"cor-4.3(n={n})")[0].details["tuples"] < need:
        problems.append(f"closure under {need} tuples")
    extra = f"k={k}" + ("  deviation: " + " | ".join(notes) if notes else "")
    assert _record(f"8(n={n})", "inner split with one k, S = -sum Sigma_N, closure", problems, secs,
                   3600.0, extra)


def test_criterion_9_generator():
    res, secs = _run("generator")
    problems = _not_passed(res)
    for n in range(1, 7):
        for N in range(1, n + 1):
            if count_gapped_subsets(n, N) != comb(2 * n - N, N):
                problems.append(f"count oracle disagrees at ({n},{N})")
    if len(generate_lifting_formula(3).schemas) != 13:
        problems.append("n=3 schema count")
    assert _record(9, "interval counts, n=2 transcription, n=3 shapes", problems, secs, 1.0)


@pytest.mark.skipif(os.environ.get("LIFTCOCYCLE_ACCEPT_N3") != "1",
                    reason="opt-in: set LIFTCOCYCLE_ACCEPT_N3=1 (hours-scale)")
def test_criterion_10_conjecture_n3():
    jobs = int(os.environ.get("LIFTCOCYCLE_JOBS", "1"))
    t0 = time.perf_counter()
    res = SUITES["conjecture-n3"](SuiteConfig("conjecture-n3", samples=2, jobs=jobs))
    secs = time.perf_counter() - t0
    problems = _not_passed(res)
    if len(res) < 2:
        problems.append("needs two primes")
    assert _record(10, "d(psi7)=0 evidence on PsiDif_3, two primes", problems, secs, float("inf"))


SKIP_10 = "[SKIP] criterion 10: d(psi7)=0 evidence on PsiDif_3  opt-in (set LIFTCOCYCLE_ACCEPT_N3=1)"


if __name__ == "__main__":
    steps = [test_criterion_1_q_series, test_criterion_2_conditions, test_criterion_3_psi3,
             test_criterion_4_psi_tilde, test_criterion_5_psi5, test_criterion_6_poisson,
             test_criterion_7_kac_moody]
    steps += [lambda n=n: test_criterion_8_inner(n) for n in (1, 2, 3)]
    steps.append(test_criterion_9_generator)
    failed = 0
    for step in steps:
        try:
            step()
        except AssertionError:
            failed += 1
    if os.environ.get("LIFTCOCYCLE_ACCEPT_N3") == "1":
        try:
            test_criterion_10_conjecture_n3()
        except AssertionError:
            failed += 1
    else:
        print(SKIP_10)
    sys.exit(1 if failed else 0)
