"""Chevalley-Eilenberg cochains with trivial coefficients.

Cochains are scalar-valued multilinear functions on an algebra viewed as a Lie
algebra through the commutator.  Alternation is the plain signed sum over all
permutations, with no 1/k! factor.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import PrecisionInsufficient
from .framework import TracedAlgebra
from .report import CheckResult
from .scalars import rational_reconstruct


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass
class Cochain:
    arity: int
    evaluator: Callable[..., object]
    alternating: bool = True
    name: str = "psi"

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        return self.evaluator(*args)


def alternate(f: Callable[..., object], arity: int, field_=None, name: str = "Alt f") -> Cochain:
    """Signed sum of f over all arity! orderings of its arguments."""

    def ev(*args):
        total = 0
        for perm in itertools.permutations(range(arity)):
            total += perm_sign(perm) * f(*(args[i] for i in perm))
        return field_(total) if field_ is not None else total

    return Cochain(arity, ev, True, name)


def ce_differential(psi: Cochain, args: Sequence, algebra: TracedAlgebra):
    """dpsi(A_0..A_k) = sum_{i<j} (-1)^(i+j) psi([A_i, A_j], A_0, .., ^i, .., ^j, .., A_k)."""
    k1 = len(args)
    if k1 != psi.arity + 1:
        raise ValueError(f"d{psi.name} takes {psi.arity + 1} arguments")
    fld = algebra.field
    total = fld.zero
    for i in range(k1):
        for j in range(i + 1, k1):
            br = algebra.bracket(args[i], args[j])
            rest = [a for t, a in enumerate(args) if t != i and t != j]
            v = psi(br, *rest)
            total = total + v if (i + j) % 2 == 0 else total - v
    return total % fld.p if fld.p else total


def ce_differential_halfsum(psi: Cochain, args: Sequence, algebra: TracedAlgebra):
    """Cross-check form: 1/2 sum_i (-1)^(i-1) sum over slots s != i of
    psi(A_1, .., [A_i, A_s], .., ^A_i, ..) with [A_i, A_s] kept in the slot of A_s."""
    fld = algebra.field
    k1 = len(args)
    total = fld.zero
    for i in range(k1):
        rest_idx = [t for t in range(k1) if t != i]
        for pos, s in enumerate(rest_idx):
            vals = [args[t] for t in rest_idx]
            vals[pos] = algebra.bracket(args[i], args[s])
            v = psi(*vals)
            total = total + v if i % 2 == 0 else total - v
    total = total * fld(Fraction(1, 2))
    return total % fld.p if fld.p else total


def differential_cochain(psi: Cochain, algebra: TracedAlgebra) -> Cochain:
    return Cochain(psi.arity + 1, lambda *a: ce_differential(psi, a, algebra), True, f"d{psi.name}")


def is_cocycle(psi: Cochain, algebra: TracedAlgebra, sampler: Callable[[random.Random], object],
               sample_count: int, seed: int, floor=None, tuples: Sequence | None = None,
               check: str | None = None, jobs: int = 1) -> CheckResult:
    """Sampled d-closedness: pass iff d(psi) vanishes on every tuple."""
    rng = random.Random(seed)
    if tuples is None:
        tuples = [[sampler(rng) for _ in range(psi.arity + 1)] for _ in range(sample_count)]
    fld = algebra.field
    t0 = time.perf_counter()
    if jobs > 1:
        from .lifting.parallel import pmap

        values = pmap(lambda i: ce_differential(psi, tuples[i], algebra), len(tuples), jobs)
    else:
        values = None
    status, witness, details = "pass", None, {"tuples": len(tuples)}
    try:
        for idx, tup in enumerate(tuples):
            v = values[idx] if values is not None else ce_differential(psi, tup, algebra)
            if not fld.is_zero(v):
                status = "fail"
                witness = [algebra.format(a) for a in tup]
                details["value"] = fld.format(v)
                details["tuple_index"] = idx
                break
    except PrecisionInsufficient as exc:
        status, details["error"] = "precision", str(exc)
    return CheckResult(check or f"cocycle:{psi.name}", status, seed, fld.name, floor, witness,
                       (time.perf_counter() - t0) * 1000.0, details)


def solve_scale(lhs_values: Sequence, rhs_values: Sequence, fld):
    """The unique c with lhs = c * rhs on all samples, or None.

    Returns ``(c, consistent)``; ``c`` is None when every rhs value is zero.
    """
    c = None
    for a, b in zip(lhs_values, rhs_values):
        if fld.is_zero(b):
            if not fld.is_zero(a):
                return None, False
            continue
        cand = a * fld.inv(b)
        if fld.p:
            cand %= fld.p
        if c is None:
            c = cand
        elif cand != c:
            return c, False
    return c, True


@dataclass
class DerivationChain:
    """sum_k a_k * (D_1^(k) ^ ... ^ D_i^(k)) over handles of a derivation family (1-based)."""

    terms: list  # [(coeff, (label, label, ...)), ...]
    family: object = None

    def __post_init__(self):
        for _, labels in self.terms:
            if len(set(labels)) != len(labels):
                raise ValueError("wedge factors must be distinct")

    @property
    def degree(self) -> int:
        return len(self.terms[0][1]) if self.terms else 0


def chain_boundary(chain: DerivationChain, algebra: TracedAlgebra, probes: Sequence,
                   family=None) -> CheckResult:
    """Lie-chain boundary sum (-1)^(a+b) [D_a, D_b] ^ (rest), applied to probes.

    Each wedge monomial of the boundary is evaluated on probe tuples through
    the alternated product of its derivation values; the chain is a cycle when
    every such evaluation vanishes.
    """
    family = family or chain.family
    fld = algebra.field
    t0 = time.perf_counter()
    deg = chain.degree

    def comm(a, b):
        return lambda x: algebra.sub(family.apply(a, family.apply(b, x)), family.apply(b, family.apply(a, x)))

    # boundary as a list of (coeff, [maps]) wedges of degree deg-1
    wedges = []
    for coeff, labels in chain.terms:
        for a, b in itertools.combinations(range(deg), 2):
            rest = [(lambda x, l=labels[t]: family.apply(l, x)) for t in range(deg) if t not in (a, b)]
            sign = -1 if (a + b) % 2 else 1
            wedges.append((sign * Fraction(coeff), [comm(labels[a], labels[b])] + rest))
    witness = None
    if wedges:
        k = deg - 1
        for tup in itertools.permutations(probes, k) if k else [()]:
            acc = algebra.zero()
            for coeff, maps in wedges:
                for perm in itertools.permutations(range(k)):
                    term = None
                    for slot, arg_i in enumerate(perm):
                        v = maps[slot](tup[arg_i])
                        term = v if term is None else algebra.mul(term, v)
                    acc = algebra.linear_combination([(fld.one, acc), (fld(coeff * perm_sign(perm)), term)])
            if not algebra.is_zero(acc):
                witness = {"probes": [algebra.format(p) for p in tup], "value": algebra.format(acc)}
                break
    status = "pass" if witness is None else "fail"
    return CheckResult("chain-boundary", status, None, fld.name, getattr(algebra, "working_floor", None),
                       witness, (time.perf_counter() - t0) * 1000.0, {"wedges": len(wedges)})


def verify_identity(lhs: Callable[[Sequence], object], rhs: Callable[[Sequence], object],
                    tuples: Sequence, fld, check: str = "identity", solve_constant: bool = False,
                    seed=None, floor=None, formatter=str) -> CheckResult:
    """lhs(t) == rhs(t) on every tuple, or lhs == c * rhs with a single solved c."""
    t0 = time.perf_counter()
    details: dict = {"tuples": len(tuples)}
    try:
        lv = [lhs(t) for t in tuples]
        rv = [rhs(t) for t in tuples]
    except PrecisionInsufficient as exc:
        return CheckResult(check, "precision", seed, fld.name, floor, str(exc))
    if solve_constant:
        c, ok = solve_scale(lv, rv, fld)
        nonzero = any(not fld.is_zero(v) for v in rv)
        details["constant"] = None if c is None else fld.format(c)
        details["consistent"] = ok
        if c is not None and fld.p:
            r = rational_reconstruct(c, fld.p)
            details["constant_rational"] = None if r is None else str(r)
        status = "pass" if ok and nonzero else "fail"
        if not nonzero:
            if all(fld.is_zero(v) for v in lv):
                status = "info"
                details["reason"] = "both sides vanished on every sample; holds only vacuously here"
            else:
                details["reason"] = "rhs vanished on every sample"
        witness = None
    else:
        bad = [i for i, (a, b) in enumerate(zip(lv, rv)) if not fld.is_zero(a - b)]
        status = "fail" if bad else "pass"
        witness = None
        if bad:
            i = bad[0]
            witness = {"tuple_index": i, "lhs": fld.format(lv[i]), "rhs": fld.format(rv[i])}
    return CheckResult(check, status, seed, fld.name, floor, witness,
                       (time.perf_counter() - t0) * 1000.0, details)
