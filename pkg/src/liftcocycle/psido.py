"""Formal pseudodifferential symbols on n circles.

A symbol is a finite table ``(a, b) -> coefficient`` standing for the
normal-ordered monomial ``x^a d^b`` (all x factors left of all d factors),
together with a per-axis *floor*: coefficients of monomials whose d-exponent
on some axis i is below ``floor[i]`` are unknown (truncated).  An exact
symbol has floor ``-inf`` on every axis.  Each symbol also carries a *ceil*,
an upper bound on the d-exponents of the untruncated series, which is what
makes floor bookkeeping through products sound.

Composition uses, per axis,

    d^b x^c = sum_{k>=0} C(b, k) (c)_k x^(c-k) d^(b-k)

with the generalized binomial C(b, k) and falling factorial (c)_k.
"""
from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .errors import ParseError, PrecisionInsufficient
from .framework import DerivationFamily, TracedAlgebra
from .scalars import QQ

NEG_INF = float("-inf")

LN_D = "ln_d"
LN_X = "ln_x"


class Symbol:
    """Immutable truncated symbol.  Do not mutate ``terms``."""

    __slots__ = ("terms", "floor", "ceil")

    def __init__(self, terms: dict, floor: tuple, ceil: tuple | None = None):
        self.terms = terms
        self.floor = tuple(floor)
        if ceil is None:
            ceil = _ceil_of(terms, self.floor)
        self.ceil = tuple(ceil)

    @property
    def n(self) -> int:
        return len(self.floor)

    @property
    def exact(self) -> bool:
        return all(f == NEG_INF for f in self.floor)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Symbol):
            return NotImplemented
        return self.terms == other.terms and self.floor == other.floor

    __hash__ = None

    def __repr__(self):
        return f"Symbol({format_symbol(self)!r})"


def _ceil_of(terms, floor):
    n = len(floor)
    ceil = [NEG_INF if f == NEG_INF else f - 1 for f in floor]
    for (_, b) in terms:
        for i in range(n):
            if b[i] > ceil[i]:
                ceil[i] = b[i]
    return tuple(ceil)


@dataclass(frozen=True)
class LogDerivationId:
    axis: int  # 1-based
    kind: str  # LN_D or LN_X

    @property
    def name(self) -> str:
        return f"ln d{self.axis}" if self.kind == LN_D else f"ln x{self.axis}"


def canonical_log_derivations(n: int) -> list[LogDerivationId]:
    """D1 = ln d1, D2 = ln x1, D3 = ln d2, D4 = ln x2, ..."""
    out = []
    for axis in range(1, n + 1):
        out += [LogDerivationId(axis, LN_D), LogDerivationId(axis, LN_X)]
    return out


@lru_cache(maxsize=None)
def _contraction(b: int, c: int, kmax):
    """Nonzero terms (k, C(b,k)(c)_k) of d^b x^c with k <= kmax.

    Returns ``(terms, cut)`` where ``cut`` tells whether nonzero terms beyond
    ``kmax`` were dropped.
    """
    natural = b if b >= 0 else (c if c >= 0 else None)
    if kmax is None:
        if natural is None:
            raise PrecisionInsufficient(f"d^{b} x^{c} is an infinite series; a finite floor is required")
        limit, cut = natural, False
    elif natural is None:
        limit, cut = kmax, True
    else:
        limit, cut = min(natural, kmax), natural > kmax
    out = []
    t = 1
    for k in range(0, limit + 1):
        if k:
            t = t * (b - k + 1) * (c - k + 1) // k
            if t == 0:
                break
        out.append((k, t))
    return tuple(out), cut


def _falling(c: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= c - j
    return out


@lru_cache(maxsize=None)
def _log_series(kind: str, c: int, m: int, kmax):
    """Nonzero (k, coefficient) of ad(ln d) or ad(ln x) on x^c d^m, 1 <= k <= kmax."""
    top = c if kind == LN_D else m
    natural = top if top >= 0 else None
    if kmax is None:
        if natural is None:
            raise PrecisionInsufficient("logarithmic derivation series needs a finite floor")
        limit, cut = natural, False
    elif natural is None:
        limit, cut = kmax, True
    else:
        limit, cut = min(natural, kmax), natural > kmax
    out = []
    for k in range(1, limit + 1):
        ff = _falling(top, k)
        if ff == 0:
            break
        sign = 1 if (k % 2 == 1) == (kind == LN_D) else -1
        out.append((k, Fraction(sign * ff, k)))
    return tuple(out), cut


def mono_compose(m1, m2, floor) -> Symbol:
    """Normal-ordered product of two monomials over the rationals."""
    (a1, b1), (a2, b2) = m1, m2
    n = len(a1)
    floor = _as_floor(floor, n)
    sers = []
    cut = []
    for i in range(n):
        kmax = None if floor[i] == NEG_INF else b1[i] + b2[i] - floor[i]
        if kmax is not None and kmax < 0:
            return Symbol({}, floor, tuple(b1[j] + b2[j] for j in range(n)))
        ser, c = _contraction(b1[i], a2[i], kmax)
        sers.append(ser)
        cut.append(c)
    out = {}
    for combo in itertools.product(*sers):
        coef = 1
        for _, t in combo:
            coef *= t
        key = (tuple(a1[i] + a2[i] - combo[i][0] for i in range(n)),
               tuple(b1[i] + b2[i] - combo[i][0] for i in range(n)))
        out[key] = Fraction(coef)
    fl = tuple(floor[i] if cut[i] else NEG_INF for i in range(n))
    return Symbol(out, fl, tuple(b1[i] + b2[i] for i in range(n)))


def _as_floor(floor, n):
    if isinstance(floor, (int, float)):
        return (floor,) * n
    floor = tuple(floor)
    if len(floor) != n:
        raise ValueError(f"floor {floor} does not match {n} axes")
    return floor


class PsiDOAlgebra(TracedAlgebra):
    """The algebra of formal pseudodifferential symbols in ``n`` variables.

    ``depth`` sets the working floor ``(-depth,)*n`` used whenever an
    operation needs a floor and none is given.
    """

    graded = True

    def __init__(self, n: int = 1, field=QQ, depth: int = 8):
        super().__init__(field)
        self.n = n
        self.depth = depth
        self.working_floor = (-depth,) * n
        self.name = f"PsiDif_{n}"
        self._logcache: dict = {}

    def with_depth(self, depth: int) -> "PsiDOAlgebra":
        return PsiDOAlgebra(self.n, self.field, depth)

    # -- constructors -----------------------------------------------------
    def monomial(self, a, b, coeff=1) -> Symbol:
        a, b = tuple(a), tuple(b)
        c = self.field(coeff)
        exact = (NEG_INF,) * self.n
        if self.field.is_zero(c):
            return Symbol({}, exact)
        return Symbol({(a, b): c}, exact)

    def const(self, c=1) -> Symbol:
        return self.monomial((0,) * self.n, (0,) * self.n, c)

    def zero(self) -> Symbol:
        return Symbol({}, (NEG_INF,) * self.n)

    def one(self) -> Symbol:
        return self.const(1)

    def _unit(self, axis, k):
        e = [0] * self.n
        e[axis - 1] = k
        return tuple(e)

    def x(self, axis: int = 1, power: int = 1) -> Symbol:
        return self.monomial(self._unit(axis, power), (0,) * self.n)

    def d(self, axis: int = 1, power: int = 1) -> Symbol:
        return self.monomial((0,) * self.n, self._unit(axis, power))

    # -- floors -----------------------------------------------------------
    def _target(self, known, floor):
        if floor is None:
            return tuple(max(k, w) for k, w in zip(known, self.working_floor))
        floor = _as_floor(floor, self.n)
        for k, f in zip(known, floor):
            if f < k:
                raise PrecisionInsufficient(f"requested floor {floor} but operands only support {known}")
        return floor

    def floor_of(self, a: Symbol):
        return a.floor

    def ceil(self, a: Symbol):
        return a.ceil

    def truncate(self, a: Symbol, floor) -> Symbol:
        floor = _as_floor(floor, self.n)
        new_floor = tuple(max(f, g) for f, g in zip(a.floor, floor))
        if new_floor == a.floor:
            return a
        terms = {k: v for k, v in a.terms.items() if all(k[1][i] >= new_floor[i] for i in range(self.n))}
        return Symbol(terms, new_floor, a.ceil)

    def prefix_floor(self, suffix_ceil):
        return tuple(-1 - c for c in suffix_ceil)

    def trace_schedule(self, ceils):
        n = self.n
        out = [None] * len(ceils)
        acc = [0] * n
        for j in range(len(ceils) - 1, -1, -1):
            out[j] = tuple(-1 - acc[i] for i in range(n))
            for i in range(n):
                acc[i] += ceils[j][i]
        return out

    # -- linear structure -------------------------------------------------
    def linear_combination(self, pairs) -> Symbol:
        n = self.n
        p = self.field.p
        floor = [NEG_INF] * n
        ceil = [NEG_INF] * n
        live = []
        for c, e in pairs:
            if (c % p == 0) if p else c == 0:
                continue
            live.append((c, e))
            for i in range(n):
                if e.floor[i] > floor[i]:
                    floor[i] = e.floor[i]
                if e.ceil[i] > ceil[i]:
                    ceil[i] = e.ceil[i]
        out: dict = {}
        for c, e in live:
            for k, v in e.terms.items():
                out[k] = out.get(k, 0) + c * v
        floor_t = tuple(floor)
        if p:
            res = {k: v % p for k, v in out.items() if v % p and all(k[1][i] >= floor_t[i] for i in range(n))}
        else:
            res = {k: v for k, v in out.items() if v and all(k[1][i] >= floor_t[i] for i in range(n))}
        return Symbol(res, floor_t, tuple(ceil))

    # -- products ---------------------------------------------------------
    def mul(self, e1: Symbol, e2: Symbol, floor=None) -> Symbol:
        n = self.n
        if (not e1.terms and e1.exact) or (not e2.terms and e2.exact):
            return self.zero()
        f1, f2, c1, c2 = e1.floor, e2.floor, e1.ceil, e2.ceil
        known = tuple(max(f1[i] + c2[i], f2[i] + c1[i]) for i in range(n))
        target = self._target(known, floor)
        cut = [f1[i] != NEG_INF or f2[i] != NEG_INF for i in range(n)]
        p = self.field.p
        terms2 = []
        for (a2, b2), v2 in e2.terms.items():
            ok = True
            for i in range(n):
                if b2[i] + c1[i] < target[i]:
                    ok = False
                    cut[i] = True
            if ok:
                terms2.append((a2, b2, v2))
        out: dict = {}
        for (a1, b1), v1 in e1.terms.items():
            ok = True
            for i in range(n):
                if b1[i] + c2[i] < target[i]:
                    ok = False
                    cut[i] = True
            if not ok:
                continue
            for a2, b2, v2 in terms2:
                sers = []
                for i in range(n):
                    kmax = None if target[i] == NEG_INF else b1[i] + b2[i] - target[i]
                    if kmax is not None and kmax < 0:
                        cut[i] = True
                        sers = None
                        break
                    ser, was_cut = _contraction(b1[i], a2[i], kmax)
                    if was_cut:
                        cut[i] = True
                    sers.append(ser)
                if sers is None:
                    continue
                v = v1 * v2
                if n == 1:
                    A, B = a1[0] + a2[0], b1[0] + b2[0]
                    for k, t in sers[0]:
                        key = ((A - k,), (B - k,))
                        out[key] = out.get(key, 0) + v * t
                    continue
                for combo in itertools.product(*sers):
                    coef = v
                    for _, t in combo:
                        coef *= t
                    key = (tuple(a1[i] + a2[i] - combo[i][0] for i in range(n)),
                           tuple(b1[i] + b2[i] - combo[i][0] for i in range(n)))
                    out[key] = out.get(key, 0) + coef
        if p:
            out = {k: v % p for k, v in out.items() if v % p}
        else:
            out = {k: v for k, v in out.items() if v}
        fl = tuple(target[i] if cut[i] else NEG_INF for i in range(n))
        return Symbol(out, fl, tuple(c1[i] + c2[i] for i in range(n)))

    # -- trace ------------------------------------------------------------
    def trace(self, e: Symbol):
        if any(f > -1 for f in e.floor):
            raise PrecisionInsufficient(f"trace needs floor <= -1 on every axis, got {e.floor}")
        key = ((-1,) * self.n, (-1,) * self.n)
        return e.terms.get(key, self.field.zero)

    def is_zero(self, e: Symbol) -> bool:
        return not e.terms

    def monomials(self, e: Symbol):
        return e.terms.items()

    # -- derivations ------------------------------------------------------
    def _log_coeffs(self, kind, c, m, kmax):
        key = (kind, c if kind == LN_D else m, kmax)
        hit = self._logcache.get(key)
        if hit is None:
            ser, cut = _log_series(kind, c, m, kmax)
            hit = (tuple((k, self.field(v)) for k, v in ser), cut)
            self._logcache[key] = hit
        return hit

    def apply_log_derivation(self, d: LogDerivationId, e: Symbol, floor=None) -> Symbol:
        n = self.n
        i = d.axis - 1
        if not e.terms and e.exact:
            return self.zero()
        known = tuple(e.floor[j] - 1 if j == i else e.floor[j] for j in range(n))
        target = self._target(known, floor)
        cut = [e.floor[j] != NEG_INF for j in range(n)]
        p = self.field.p
        out: dict = {}
        for (a, b), v in e.terms.items():
            low = [j for j in range(n) if j != i and b[j] < target[j]]
            if low:
                cut[low[0]] = True
                continue
            kmax = None if target[i] == NEG_INF else b[i] - target[i]
            if kmax is not None and kmax < 1:
                cut[i] = True
                continue
            ser, was_cut = self._log_coeffs(d.kind, a[i], b[i], kmax)
            if was_cut:
                cut[i] = True
            for k, t in ser:
                aa = a[:i] + (a[i] - k,) + a[i + 1:]
                bb = b[:i] + (b[i] - k,) + b[i + 1:]
                key = (aa, bb)
                out[key] = out.get(key, 0) + v * t
        if p:
            out = {k: v % p for k, v in out.items() if v % p}
        else:
            out = {k: v for k, v in out.items() if v}
        fl = tuple(target[j] if cut[j] else NEG_INF for j in range(n))
        ceil = tuple(e.ceil[j] - 1 if j == i else e.ceil[j] for j in range(n))
        return Symbol(out, fl, ceil)

    def q_element(self, axis: int, floor=None) -> Symbol:
        """sum_{m>=1} ((m-1)!/m) x^-m d^-m on one axis, truncated at the floor."""
        n = self.n
        i = axis - 1
        if floor is None:
            depth = -self.working_floor[i]
        else:
            depth = -_as_floor(floor, n)[i]
        if depth == float("inf"):
            raise PrecisionInsufficient("Q is an infinite series; a finite floor is required")
        terms = {}
        for m in range(1, int(depth) + 1):
            e = self._unit(axis, -m)
            terms[(e, e)] = self.field(Fraction(factorial(m - 1), m))
        fl = tuple(-depth if j == i else NEG_INF for j in range(n))
        ceil = tuple(-1 if j == i else 0 for j in range(n))
        return Symbol(terms, fl, ceil)

    def log_family(self) -> DerivationFamily:
        """D_{2i-1} = ad(ln d_i), D_{2i} = ad(ln x_i), Q_{2i-1,2i} = Q on axis i."""
        ids = canonical_log_derivations(self.n)
        maps = [(lambda e, d=d: self.apply_log_derivation(d, e)) for d in ids]
        upper = {(2 * ax - 1, 2 * ax): self.q_element(ax) for ax in range(1, self.n + 1)}
        return DerivationFamily.with_antisymmetric_q(self, [d.name for d in ids], maps, upper)

    # -- sampling ---------------------------------------------------------
    def generators(self) -> list:
        gens = []
        for ax in range(1, self.n + 1):
            gens += [self.x(ax), self.d(ax), self.x(ax, -1), self.d(ax, -1)]
        return gens

    def sample(self, rng: random.Random, max_terms: int = 3, lo: int = -2, hi: int = 2) -> Symbol:
        pairs = []
        for _ in range(rng.randint(1, max_terms)):
            a = tuple(rng.randint(lo, hi) for _ in range(self.n))
            b = tuple(rng.randint(lo, hi) for _ in range(self.n))
            pairs.append((self.field(1), self.monomial(a, b, rng.choice([-3, -2, -1, 1, 2, 3]))))
        return self.linear_combination(pairs)

    def sample_monomial(self, rng: random.Random, lo: int = -2, hi: int = 2) -> Symbol:
        a = tuple(rng.randint(lo, hi) for _ in range(self.n))
        b = tuple(rng.randint(lo, hi) for _ in range(self.n))
        return self.monomial(a, b, rng.choice([-2, -1, 1, 2]))

    def sample_differential(self, rng: random.Random, degree: int = 2, max_terms: int = 3) -> Symbol:
        """Polynomial differential operator with every exponent in [0, degree]."""
        pairs = []
        for _ in range(rng.randint(1, max_terms)):
            a = tuple(rng.randint(0, degree) for _ in range(self.n))
            b = tuple(rng.randint(0, degree) for _ in range(self.n))
            pairs.append((self.field(1), self.monomial(a, b, rng.choice([-2, -1, 1, 2, 3]))))
        return self.linear_combination(pairs)

    def balanced_tuple(self, rng: random.Random, size: int, a_range=(0, 2), b_range=(0, 1),
                       coeffs=(1, 2, 3), extra_terms: int = 0, tries: int = 10000) -> list:
        """Distinct monomials whose x-minus-d weights cancel on every axis.

        The trace of a product of monomials can only be nonzero when the
        weights cancel, so unbalanced tuples make most checks vacuous.
        ``extra_terms`` adds further random monomials from the same box.
        """
        n = self.n
        for _ in range(tries):
            mons = [(tuple(rng.randint(*a_range) for _ in range(n)), tuple(rng.randint(*b_range) for _ in range(n)))
                    for _ in range(size - 1)]
            a_last, b_last = [], []
            for i in range(n):
                w = sum(a[i] - b[i] for a, b in mons)
                opts = [b for b in range(b_range[0], b_range[1] + 1) if a_range[0] <= b - w <= a_range[1]]
                if not opts:
                    break
                b = rng.choice(opts)
                b_last.append(b)
                a_last.append(b - w)
            else:
                mons.append((tuple(a_last), tuple(b_last)))
                if len(set(mons)) == size:
                    break
        else:
            raise ValueError("no balanced tuple in the requested exponent box")
        out = []
        for a, b in mons:
            e = self.monomial(a, b, rng.choice(coeffs))
            for _ in range(extra_terms):
                a2 = tuple(rng.randint(*a_range) for _ in range(n))
                b2 = tuple(rng.randint(*b_range) for _ in range(n))
                e = self.add(e, self.monomial(a2, b2, rng.choice(coeffs)))
            out.append(e)
        return out

    def depth_for(self, elements: Sequence[Symbol]) -> int:
        """Working depth that keeps every trace built from ``elements`` exact."""
        return -min(sufficient_floor([profile_of(e) for e in elements]))

    # -- text -------------------------------------------------------------
    def format(self, e: Symbol) -> str:
        return format_symbol(e, self.field)

    def parse(self, text: str) -> Symbol:
        return parse_symbol(text, self.n, self.field)

    # -- precision helpers -------------------------------------------------
    def product_trace(self, factors: Sequence[Symbol], start_floor) -> object:
        """Trace of a product, each running product kept above a rising floor.

        The j-th running product is requested at ``start_floor`` plus the
        positive parts of the first j factor ceilings; see
        :func:`sufficient_floor` for the start value that makes this exact.
        """
        start = _as_floor(start_floor, self.n)
        acc = factors[0]
        level = [start[i] + max(factors[0].ceil[i], 0) for i in range(self.n)]
        for f in factors[1:]:
            level = [level[i] + max(f.ceil[i], 0) for i in range(self.n)]
            acc = self.mul(acc, f, tuple(level))
        if any(f > -1 for f in acc.floor):
            raise PrecisionInsufficient(f"product known only above {acc.floor}")
        return self.trace(acc)


def sufficient_floor(profiles: Sequence[tuple[Sequence[int], Sequence[int]]], target: str = "trace") -> tuple:
    """Start floor for :meth:`PsiDOAlgebra.product_trace` over exact factors.

    ``profiles`` lists (max d-degree per axis, max x-degree per axis) for each
    factor.  Running products only lose d-degree relative to the sum of the
    factor ceilings, so starting at ``-1 - sum(max(deg, 0))`` leaves the
    coefficient at d^-1 known after the last factor.
    """
    if target != "trace":
        raise ValueError("only the trace target is supported")
    n = len(profiles[0][0])
    return tuple(-1 - sum(max(int(p[0][i]), 0) for p in profiles) for i in range(n))


def profile_of(e: Symbol) -> tuple[tuple, tuple]:
    n = e.n
    xdeg = tuple(max((a[i] for a, _ in e.terms), default=0) for i in range(n))
    return e.ceil, xdeg


# -- text serialization -----------------------------------------------------

def _fmt_mono(a, b):
    parts = []
    for i, e in enumerate(a, 1):
        if e:
            parts.append(f"x{i}" if e == 1 else f"x{i}^{e}")
    for i, e in enumerate(b, 1):
        if e:
            parts.append(f"d{i}" if e == 1 else f"d{i}^{e}")
    return " ".join(parts)


def format_symbol(e: Symbol, field=QQ) -> str:
    chunks = []
    for (a, b) in sorted(e.terms, key=lambda k: (tuple(-x for x in k[1]), k[0])):
        v = e.terms[(a, b)]
        if field.p is None:
            v = Fraction(v)
            sign, mag = ("-", -v) if v < 0 else ("+", v)
        else:
            sign, mag = "+", v % field.p
        mono = _fmt_mono(a, b)
        chunks.append(f"{sign} {mag}" + (f" {mono}" if mono else ""))
    text = " ".join(chunks) if chunks else "0"
    finite = [f"d{i}>={int(f)}" for i, f in enumerate(e.floor, 1) if f != NEG_INF]
    if finite:
        text += "  floor: " + " ".join(finite)
    return text


_TERM = re.compile(r"([+-])\s*([0-9]+(?:/[0-9]+)?)?((?:\s*[xd][0-9]+(?:\^-?[0-9]+)?)*)")
_VAR = re.compile(r"([xd])([0-9]+)(?:\^(-?[0-9]+))?")


def parse_symbol(text: str, n: int, field=QQ) -> Symbol:
    body, _, floor_part = text.partition("floor:")
    floor = [NEG_INF] * n
    for tok in floor_part.split():
        m = re.fullmatch(r"d([0-9]+)>=(-?[0-9]+)", tok)
        if not m:
            raise ParseError(f"bad floor annotation {tok!r}")
        floor[int(m.group(1)) - 1] = int(m.group(2))
    body = body.strip()
    if body in ("", "0"):
        return Symbol({}, tuple(floor))
    if body[0] not in "+-":
        body = "+ " + body
    pos = 0
    terms: dict = {}
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse symbol near {body[pos:]!r}")
        pos = m.end()
        while pos < len(body) and body[pos].isspace():
            pos += 1
        sign, coeff, mono = m.groups()
        if coeff is None and not mono.strip():
            raise ParseError(f"empty term in {text!r}")
        c = field(coeff or "1")
        if sign == "-":
            c = field(-1) * c if field.p is None else (-c) % field.p
        a, b = [0] * n, [0] * n
        for v in _VAR.finditer(mono):
            ax = int(v.group(2)) - 1
            if ax >= n:
                raise ParseError(f"variable {v.group(0)} out of range for {n} axes")
            (a if v.group(1) == "x" else b)[ax] += int(v.group(3) or 1)
        key = (tuple(a), tuple(b))
        terms[key] = terms.get(key, 0) + c
    p = field.p
    terms = {k: (v % p if p else v) for k, v in terms.items() if (v % p if p else v)}
    return Symbol(terms, tuple(floor))
