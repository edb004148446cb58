"""Laurent polynomials in canonical coordinates p1..pn, q1..qn.

Exponent vectors are tuples of length 2n ordered (p1, .., pn, q1, .., qn);
the residue trace reads the coefficient at the all-(-1) vector.
"""
from __future__ import annotations

import itertools
import random
import re
from typing import Sequence

from .errors import NonMonomialInput, ParseError
from .framework import TracedAlgebra
from .scalars import QQ


class LaurentPoly:
    """Immutable sparse Laurent polynomial (exponent tuple -> coefficient)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = terms

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"LaurentPoly({self.terms!r})"

    @property
    def is_monomial(self) -> bool:
        return len(self.terms) == 1


class PoissonAlgebra(TracedAlgebra):
    """Commutative product, Poisson bracket {p_i, q_j} = delta_ij, residue trace.

    ``mul`` is the commutative product; ``bracket`` is the Poisson bracket, so
    cochains on this object live on the Poisson Lie algebra.
    """

    name = "poisson"

    def __init__(self, n: int = 1, field=QQ):
        super().__init__(field)
        self.n = n
        self.nvars = 2 * n

    # -- construction -----------------------------------------------------
    def _norm(self, terms: dict) -> LaurentPoly:
        p = self.field.p
        if p:
            return LaurentPoly({k: v % p for k, v in terms.items() if v % p})
        return LaurentPoly({k: v for k, v in terms.items() if v})

    def monomial(self, exps, coeff=1) -> LaurentPoly:
        exps = tuple(exps)
        if len(exps) != self.nvars:
            raise ValueError(f"need {self.nvars} exponents")
        return self._norm({exps: self.field(coeff)})

    def var(self, name: str) -> LaurentPoly:
        """``p3`` or ``q1``."""
        return self.monomial(self._unit(self._var_index(name)))

    def p(self, i: int = 1) -> LaurentPoly:
        return self.var(f"p{i}")

    def q(self, i: int = 1) -> LaurentPoly:
        return self.var(f"q{i}")

    def _var_index(self, name: str) -> int:
        m = re.fullmatch(r"([pq])(\d+)", name)
        if not m or not 1 <= int(m.group(2)) <= self.n:
            raise ParseError(f"unknown variable {name!r}")
        i = int(m.group(2)) - 1
        return i if m.group(1) == "p" else self.n + i

    def _unit(self, v: int, k: int = 1):
        e = [0] * self.nvars
        e[v] = k
        return tuple(e)

    def zero(self) -> LaurentPoly:
        return LaurentPoly({})

    def one(self) -> LaurentPoly:
        return self.monomial((0,) * self.nvars)

    # -- arithmetic ---------------------------------------------------------
    def linear_combination(self, pairs) -> LaurentPoly:
        out: dict = {}
        for c, f in pairs:
            for k, v in f.terms.items():
                out[k] = out.get(k, 0) + c * v
        return self._norm(out)

    def mul(self, f: LaurentPoly, g: LaurentPoly, floor=None) -> LaurentPoly:
        out: dict = {}
        for k1, v1 in f.terms.items():
            for k2, v2 in g.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return self._norm(out)

    def partial(self, f: LaurentPoly, v: int) -> LaurentPoly:
        """Derivative in variable index v (0-based over p1..pn, q1..qn)."""
        out = {}
        for k, c in f.terms.items():
            if k[v]:
                kk = k[:v] + (k[v] - 1,) + k[v + 1:]
                out[kk] = c * k[v]
        return self._norm(out)

    def poisson_bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        """sum_k (df/dp_k dg/dq_k - df/dq_k dg/dp_k)."""
        n = self.n
        pairs = []
        one, minus = self.field.one, self.field(-1)
        for k in range(n):
            pairs.append((one, self.mul(self.partial(f, k), self.partial(g, n + k))))
            pairs.append((minus, self.mul(self.partial(f, n + k), self.partial(g, k))))
        return self.linear_combination(pairs)

    def bracket(self, a, b, floor=None):
        return self.poisson_bracket(a, b)

    def residue_trace(self, f: LaurentPoly):
        return f.terms.get((-1,) * self.nvars, self.field.zero)

    def trace(self, a):
        return self.residue_trace(a)

    def is_zero(self, a) -> bool:
        return not a.terms

    def monomials(self, a):
        return a.terms.items()

    def divide_by_monomial(self, f: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
        if not d.is_monomial:
            raise NonMonomialInput("division needs a monomial divisor")
        (k2, v2), = d.terms.items()
        inv = self.field.inv(v2)
        return self._norm({tuple(a - b for a, b in zip(k1, k2)): v1 * inv for k1, v1 in f.terms.items()})

    def log_derivation(self, d: LaurentPoly, f: LaurentPoly) -> LaurentPoly:
        """{ln D, f} = {D, f} / D for a monomial D."""
        return self.divide_by_monomial(self.poisson_bracket(d, f), d)

    # -- sampling and text --------------------------------------------------
    def generators(self) -> list:
        return [self.var(f"{c}{i}") for c in "pq" for i in range(1, self.n + 1)]

    def sample_monomial(self, rng: random.Random, lo: int = -2, hi: int = 2) -> LaurentPoly:
        return self.monomial(tuple(rng.randint(lo, hi) for _ in range(self.nvars)), rng.randint(1, 5))

    def sample(self, rng: random.Random, max_terms: int = 3, lo: int = -2, hi: int = 2) -> LaurentPoly:
        k = rng.randint(1, max_terms)
        return self.linear_combination([(self.field.one, self.sample_monomial(rng, lo, hi)) for _ in range(k)])

    def balanced_tuple(self, rng: random.Random, size: int, target: Sequence[int], lo: int = -2, hi: int = 2,
                       extra_terms: int = 1) -> list:
        """Monomial tuple whose exponent sum is ``target``, plus a few random extra terms."""
        mons = [tuple(rng.randint(lo, hi) for _ in range(self.nvars)) for _ in range(size - 1)]
        last = tuple(target[v] - sum(m[v] for m in mons) for v in range(self.nvars))
        mons.append(last)
        out = []
        for m in mons:
            f = self.monomial(m, rng.randint(1, 5))
            for _ in range(rng.randint(0, extra_terms)):
                f = self.add(f, self.sample_monomial(rng, lo, hi))
            out.append(f)
        rng.shuffle(out)
        return out

    def var_names(self) -> list[str]:
        return [f"p{i}" for i in range(1, self.n + 1)] + [f"q{i}" for i in range(1, self.n + 1)]

    def format(self, f: LaurentPoly) -> str:
        if not f.terms:
            return "0"
        names = self.var_names()
        parts = []
        for k in sorted(f.terms):
            c = f.terms[k]
            if self.field.p:
                c = self.field.symmetric(c)
            s = str(c)
            sign = "-" if s.startswith("-") else "+"
            mono = " ".join(nm if e == 1 else f"{nm}^{e}" for nm, e in zip(names, k) if e)
            parts.append(f"{sign} {s.lstrip('-')}" + (f" {mono}" if mono else ""))
        return " ".join(parts)

    def parse(self, text: str) -> LaurentPoly:
        text = text.strip()
        if text in ("0", ""):
            return self.zero()
        toks = re.findall(r"[pq]\d+(?:\^-?\d+)?|[+-]|[^\s+-]+", text)
        terms: dict = {}
        sign, coeff, exps, started = 1, None, [0] * self.nvars, False

        def flush():
            if not started:
                return
            c = self.field(coeff if coeff is not None else 1) * sign
            k = tuple(exps)
            terms[k] = terms.get(k, 0) + c

        for tok in toks:
            if tok in "+-":
                flush()
                sign, coeff, exps, started = (1 if tok == "+" else -1), None, [0] * self.nvars, False
                continue
            started = True
            m = re.fullmatch(r"([pq]\d+)(?:\^(-?\d+))?", tok)
            if m:
                exps[self._var_index(m.group(1))] += int(m.group(2) or 1)
            else:
                if coeff is not None:
                    raise ParseError(f"unexpected token {tok!r}")
                try:
                    coeff = self.field(tok)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad coefficient {tok!r}") from exc
        flush()
        return self._norm(terms)


def poisson_bracket(alg: PoissonAlgebra, f, g):
    return alg.poisson_bracket(f, g)


def residue_trace(alg: PoissonAlgebra, f):
    return alg.residue_trace(f)


def _det(alg: PoissonAlgebra, rows: list[list[LaurentPoly]]) -> LaurentPoly:
    """Leibniz expansion over all permutations (sizes here are at most 6)."""
    from .cohomology import perm_sign

    k = len(rows)
    pairs = []
    for perm in itertools.permutations(range(k)):
        term = alg.one()
        for i in range(k):
            term = alg.mul(term, rows[i][perm[i]])
            if not term:
                break
        if term:
            pairs.append((alg.field(perm_sign(perm)), term))
    return alg.linear_combination(pairs)


def f_from_log_monomials(alg: PoissonAlgebra, ds: Sequence[LaurentPoly]) -> LaurentPoly:
    """F = det(dD_i / dxi_j) / (D_1 ... D_2n) with xi = (p1..pn, q1..qn)."""
    if len(ds) != alg.nvars:
        raise ValueError(f"need {alg.nvars} log monomials")
    for d in ds:
        if not d.is_monomial:
            raise NonMonomialInput(f"{alg.format(d)} is not a single monomial")
    jac = [[alg.partial(d, j) for j in range(alg.nvars)] for d in ds]
    det = _det(alg, jac)
    prod = alg.one()
    for d in ds:
        prod = alg.mul(prod, d)
    return alg.divide_by_monomial(det, prod)


def psi0_density(alg: PoissonAlgebra) -> LaurentPoly:
    """F for the log derivations of the coordinates themselves: 1/(p1..qn)."""
    return alg.monomial((-1,) * alg.nvars)


def _alt_product_trace(alg: PoissonAlgebra, slot_values: list[list[LaurentPoly]], prefactor: LaurentPoly):
    """sum over permutations s of sign(s) Tr(prefactor * prod_slot value[slot][s(slot)]).

    Subset DP over used arguments; the product is commutative but the sign
    bookkeeping is the same as in the lifting evaluator.
    """
    fld = alg.field
    m = len(slot_values)
    states = {0: prefactor}
    for slot in range(m):
        nxt: dict = {}
        for mask, acc in states.items():
            for j in range(m):
                if mask >> j & 1:
                    continue
                v = slot_values[slot][j]
                if not v:
                    continue
                sign = fld(-1) if (mask >> (j + 1)).bit_count() & 1 else fld.one
                nxt.setdefault(mask | 1 << j, []).append((sign, alg.mul(acc, v)))
        states = {k: alg.linear_combination(v) for k, v in nxt.items()}
        states = {k: v for k, v in states.items() if v}
        if not states:
            return fld.zero
    return sum((alg.residue_trace(v) for v in states.values()), fld.zero)


def psi_f_evaluate(alg: PoissonAlgebra, F: LaurentPoly, args: Sequence[LaurentPoly]):
    """Alt_f Tr(F * df1/dp1 * .. * df2n/dqn * f_{2n+1}), unnormalized."""
    m = alg.nvars + 1
    if len(args) != m:
        raise ValueError(f"need {m} arguments")
    if not F:
        return alg.field.zero
    slots = [[alg.partial(a, v) for a in args] for v in range(alg.nvars)] + [list(args)]
    return _alt_product_trace(alg, slots, F)


def psi_d_evaluate(alg: PoissonAlgebra, ds: Sequence[LaurentPoly], args: Sequence[LaurentPoly]):
    """Alt_f Tr({ln D_1, f_1} * .. * {ln D_2n, f_2n} * f_{2n+1}) for monomial D_i."""
    m = alg.nvars + 1
    if len(args) != m:
        raise ValueError(f"need {m} arguments")
    slots = [[alg.log_derivation(d, a) for a in args] for d in ds] + [list(args)]
    return _alt_product_trace(alg, slots, alg.one())
