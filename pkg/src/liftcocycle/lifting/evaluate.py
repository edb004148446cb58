"""Evaluation of lifting formulas.

For one schema the value is

    sum over argument permutations s and label assignments t of
        sign(s) * sign(t) * Tr(product of the factor values)

The sum is computed by dynamic programming over (used arguments, used labels):
every partial product that has consumed the same sets of arguments and labels
is merged before the next multiplication.  Signs come from incremental
inversion counts, so no permutation is ever enumerated explicitly.

Label modes
-----------
``relabel``  every label in the word (D-applied slots and both indices of each
             Q factor) is permuted; Q(i,j) becomes Q(t(i),t(j)).
``paired``   as ``relabel`` but each Q factor takes its two labels as an
             unordered pair, so the result is relabel / 2**(number of Q's).
             With inner derivations and Q_ij = [M_i, M_j] this is exactly the
             alternation of the literal products M_i M_j.
``fixed``    only the labels of D-applied slots are permuted; Q factors keep
             the labels written in the schema.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..errors import MissingQEntry
from .parallel import pmap
from .schema import Bare, DApplied, LiftingFormula, Plain, QFactor, TermSchema, label_slots

MODES = ("paired", "relabel", "fixed")


def _parity(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv & 1


@dataclass
class EvalContext:
    """Factor values for one argument tuple, computed on demand and cached."""

    algebra: object
    family: object
    args: list
    dvals: dict = field(default_factory=dict)

    def plain(self, j):
        return self.args[j]

    def dapplied(self, label, j):
        key = (label, j)
        v = self.dvals.get(key)
        if v is None:
            v = self.family.apply(label, self.args[j])
            self.dvals[key] = v
        return v

    def q(self, i, j):
        return self.family.q(i, j)

    def bare(self, label):
        if self.family.inner is None:
            raise MissingQEntry("bare derivation factors need an inner family")
        return self.family.inner[label - 1]


def _candidates(schema: TermSchema, ctx: EvalContext, mode: str):
    """Per word position: list of (arg index or -1, label bit indices, value)."""
    word = schema.word
    alg = ctx.algebra
    m = len(ctx.args)
    if mode == "fixed":
        alphabet = sorted({f.d for f in word if isinstance(f, (DApplied, Bare))})
        ref_labels = [f.d for f in word if isinstance(f, (DApplied, Bare))]
    else:
        alphabet = sorted(set(label_slots(word)))
        ref_labels = label_slots(word)
    index = {lab: u for u, lab in enumerate(alphabet)}
    L = len(alphabet)
    out = []
    for f in word:
        cands = []
        if isinstance(f, Plain):
            for j in range(m):
                cands.append((j, (), ctx.plain(j)))
        elif isinstance(f, DApplied):
            for j in range(m):
                for u in range(L):
                    cands.append((j, (u,), ctx.dapplied(alphabet[u], j)))
        elif isinstance(f, Bare):
            for u in range(L):
                cands.append((-1, (u,), ctx.bare(alphabet[u])))
        elif isinstance(f, QFactor):
            if mode == "fixed":
                cands.append((-1, (), ctx.q(f.i, f.j)))
            else:
                for u in range(L):
                    for v in range(L):
                        if u == v or (mode == "paired" and u > v):
                            continue
                        cands.append((-1, (u, v), ctx.q(alphabet[u], alphabet[v])))
        else:
            raise TypeError(f"unknown factor {f!r}")
        cands = [c for c in cands if not _exact_zero(alg, c[2])]
        out.append(cands)
    ref_sign = -1 if (_parity([f.a for f in word if not isinstance(f, (QFactor, Bare))])
                      ^ _parity([index[x] for x in ref_labels])) else 1
    return out, ref_sign


def _exact_zero(alg, v) -> bool:
    if not alg.is_zero(v):
        return False
    fl = alg.floor_of(v)
    return fl is None or all(x == float("-inf") for x in fl)


class _FloorPlan:
    """Floor at which a partial product must be known, given the state.

    After word position t with argument set ``am`` used, the rest of the word
    contributes at most: the Q-type ceils of the remaining non-argument
    positions plus, per axis, the r largest ceils of the unused arguments
    (r = remaining argument positions).  The prefix floor follows from that
    bound through ``algebra.prefix_floor``.
    """

    def __init__(self, alg, cands, m):
        self.alg = alg
        n_ax = None
        arg_ceil = [None] * m
        fixed = []  # per position: ceil bound for non-argument factors, or None
        for cs in cands:
            if cs and cs[0][0] >= 0:
                fixed.append(None)
                for j, _, v in cs:
                    c = alg.ceil(v)
                    arg_ceil[j] = c if arg_ceil[j] is None else tuple(map(max, arg_ceil[j], c))
            else:
                cc = [alg.ceil(v) for _, _, v in cs]
                fixed.append(tuple(max(c[i] for c in cc) for i in range(len(cc[0]))))
            for _, _, v in cs:
                n_ax = len(alg.ceil(v))
                break
        self.n_ax = n_ax
        self.arg_ceil = [c if c is not None else (float("-inf"),) * n_ax for c in arg_ceil]
        T = len(cands)
        self.r_after = [0] * T
        self.q_after = [(0,) * n_ax for _ in range(T)]
        r, q = 0, [0] * n_ax
        for t in range(T - 1, -1, -1):
            self.r_after[t] = r
            self.q_after[t] = tuple(q)
            if fixed[t] is None:
                r += 1
            else:
                q = [a + b for a, b in zip(q, fixed[t])]
        self.m = m
        self.cache = {}

    def target(self, t, am):
        key = (t, am)
        hit = self.cache.get(key)
        if hit is None:
            r = self.r_after[t]
            bound = []
            for i in range(self.n_ax):
                free = sorted((self.arg_ceil[j][i] for j in range(self.m) if not am >> j & 1), reverse=True)
                bound.append(self.q_after[t][i] + sum(free[:r]))
            hit = self.alg.prefix_floor(tuple(bound))
            self.cache[key] = hit
        return hit


def schema_value(schema: TermSchema, ctx: EvalContext, mode: str, chunk: tuple[int, int] | None = None):
    """Signed alternation sum of one schema (without the schema coefficient).

    ``chunk = (k, K)`` restricts the first word position to candidates with
    index congruent to k mod K; summing over k gives the full value.
    """
    alg = ctx.algebra
    fld = alg.field
    cands, ref_sign = _candidates(schema, ctx, mode)
    if any(not cs for cs in cands):
        return fld.zero
    if chunk is not None:
        k, K = chunk
        cands[0] = [c for i, c in enumerate(cands[0]) if i % K == k]
        if not cands[0]:
            return fld.zero
    plan = _FloorPlan(alg, cands, len(ctx.args)) if alg.graded else None
    states = {(0, 0): None}
    minus = fld(-1)
    one = fld.one
    for t, cs in enumerate(cands):
        nxt = defaultdict(list)
        for (am, lm), acc in states.items():
            for j, labs, val in cs:
                par = 0
                a2 = am
                if j >= 0:
                    if am >> j & 1:
                        continue
                    par += (am >> (j + 1)).bit_count()
                    a2 = am | (1 << j)
                l2 = lm
                ok = True
                for u in labs:
                    if l2 >> u & 1:
                        ok = False
                        break
                    par += (l2 >> (u + 1)).bit_count()
                    l2 |= 1 << u
                if not ok:
                    continue
                target = plan.target(t, a2) if plan else None
                if acc is None:
                    prod = val if target is None else alg.truncate(val, target)
                else:
                    prod = alg.mul(acc, val, target)
                nxt[(a2, l2)].append((minus if par & 1 else one, prod))
        states = {}
        for key, pairs in nxt.items():
            v = pairs[0][1] if len(pairs) == 1 and pairs[0][0] == one else alg.linear_combination(pairs)
            if not _exact_zero(alg, v):
                states[key] = v
        if not states:
            return fld.zero
    total = sum((alg.trace(acc) for acc in states.values()), fld.zero) * ref_sign
    return total % fld.p if fld.p else total


def evaluate(formula: LiftingFormula, algebra, family, args, mode: str | None = None,
             jobs: int = 1, chunks: int | None = None):
    """Value of ``formula`` at ``args``; deterministic for any ``jobs``."""
    mode = mode or formula.mode
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if len(args) != formula.m:
        raise ValueError(f"{formula.name or 'formula'} takes {formula.m} arguments, got {len(args)}")
    fld = algebra.field
    ctx = EvalContext(algebra, family, list(args))
    if jobs <= 1:
        parts = [fld(s.coeff) * schema_value(s, ctx, mode) for s in formula.schemas]
    else:
        K = chunks or jobs
        tasks = [(si, k) for si in range(len(formula.schemas)) for k in range(K)]

        def run(idx):
            si, k = tasks[idx]
            s = formula.schemas[si]
            return fld(s.coeff) * schema_value(s, ctx, mode, (k, K))

        parts = pmap(run, len(tasks), jobs)
    total = sum(parts, fld.zero)
    return total % fld.p if fld.p else total
