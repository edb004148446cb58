"""Traced associative algebras with derivation families.

Every concrete algebra (pseudodifferential symbols, matrices, currents)
subclasses :class:`TracedAlgebra`.  Elements are immutable values; the
algebra object carries the coefficient field and any precision policy.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .errors import MissingQEntry, PrecisionInsufficient
from .report import CheckResult
from .scalars import QQ


class TracedAlgebra:
    """Interface shared by the concrete algebras.

    Subclasses implement ``zero``, ``one``, ``linear_combination``, ``mul``,
    ``trace``, ``is_zero``, ``generators``, ``sample`` and ``format``.
    ``floor`` arguments are only meaningful for truncated algebras and are
    ignored elsewhere.
    """

    name = "algebra"
    graded = False  # True when elements carry a truncation floor

    def __init__(self, field=QQ):
        self.field = field

    # -- linear structure -------------------------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def linear_combination(self, pairs: Iterable[tuple[Any, Any]]):
        raise NotImplementedError

    def add(self, a, b):
        one = self.field.one
        return self.linear_combination([(one, a), (one, b)])

    def sub(self, a, b):
        f = self.field
        return self.linear_combination([(f.one, a), (f(-1), b)])

    def scale(self, c, a):
        return self.linear_combination([(self.field(c), a)])

    def neg(self, a):
        return self.scale(-1, a)

    # -- products ---------------------------------------------------------
    def mul(self, a, b, floor=None):
        raise NotImplementedError

    def bracket(self, a, b, floor=None):
        return self.sub(self.mul(a, b, floor), self.mul(b, a, floor))

    def product(self, factors: Sequence, floor=None):
        acc = factors[0]
        for f in factors[1:]:
            acc = self.mul(acc, f, floor)
        return acc

    # -- trace and tests --------------------------------------------------
    def trace(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        raise NotImplementedError

    def generators(self) -> list:
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def format(self, a) -> str:
        return repr(a)

    # -- precision hooks (identity for exact algebras) ---------------------
    def ceil(self, a):
        return None

    def floor_of(self, a):
        return None

    def trace_schedule(self, ceils: Sequence) -> list:
        """Floors at which the running left products must be known.

        ``ceils[j]`` bounds the degree of the j-th factor; entry ``j`` of the
        result is the floor needed for the product of factors ``0..j`` so
        that the trace of the full product is exact.
        """
        return [None] * len(ceils)

    def prefix_floor(self, suffix_ceil):
        """Floor a left factor needs so that Tr(left * right) is exact when
        ``right`` has degree at most ``suffix_ceil``."""
        return None

    def truncate(self, a, floor):
        return a

    def monomials(self, a) -> Iterable[tuple[Any, Any]]:
        """(hashable key, coefficient) pairs spanning ``a``."""
        raise NotImplementedError


@dataclass
class DerivationFamily:
    """Derivations D_1..D_l (1-based labels) with the table [D_i, D_j] = ad(Q_ij).

    ``q_table`` stores every ordered pair it knows about; nothing is
    antisymmetrized on lookup.
    """

    names: list[str]
    maps: list[Callable[[Any], Any]]
    q_table: dict[tuple[int, int], Any] = field(default_factory=dict)
    inner: list | None = None  # the elements M_k when D_k = ad(M_k)

    @property
    def size(self) -> int:
        return len(self.maps)

    def apply(self, k: int, a):
        return self.maps[k - 1](a)

    def q(self, i: int, j: int):
        try:
            return self.q_table[(i, j)]
        except KeyError:
            raise MissingQEntry(f"Q table has no entry for ({i},{j})") from None

    @classmethod
    def with_antisymmetric_q(cls, algebra: TracedAlgebra, names, maps, upper: dict, inner=None):
        """Build the full table from entries with i < j (absent pairs are zero)."""
        l = len(maps)
        table = {}
        for i in range(1, l + 1):
            table[(i, i)] = algebra.zero()
            for j in range(i + 1, l + 1):
                qij = upper.get((i, j), algebra.zero())
                table[(i, j)] = qij
                table[(j, i)] = algebra.neg(qij)
        return cls(list(names), list(maps), table, inner)


def inner_family(algebra: TracedAlgebra, elements: Sequence, names=None) -> DerivationFamily:
    """D_k = ad(M_k) with Q_ij = [M_i, M_j] stored for every ordered pair."""
    elements = list(elements)
    maps = [(lambda a, m=m: algebra.bracket(m, a)) for m in elements]
    names = names or [f"ad(M{k + 1})" for k in range(len(elements))]
    table = {}
    for i, mi in enumerate(elements, 1):
        for j, mj in enumerate(elements, 1):
            table[(i, j)] = algebra.bracket(mi, mj)
    return DerivationFamily(list(names), maps, table, elements)


def derivation_commutator(algebra: TracedAlgebra, family: DerivationFamily, i: int, j: int, a):
    """[D_i, D_j](a) = D_i(D_j a) - D_j(D_i a)."""
    return algebra.sub(family.apply(i, family.apply(j, a)), family.apply(j, family.apply(i, a)))


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000.0


def check_trace_property(algebra: TracedAlgebra, sample_count: int, seed: int,
                         pairs: Sequence | None = None) -> CheckResult:
    """trace([a, b]) == 0 for sampled (or supplied) pairs."""
    rng = random.Random(seed)
    if pairs is None:
        pairs = [(algebra.sample(rng), algebra.sample(rng)) for _ in range(sample_count)]

    def run():
        for a, b in pairs:
            t = algebra.trace(algebra.bracket(a, b))
            if not algebra.field.is_zero(t):
                return [algebra.format(a), algebra.format(b)], t
        return None, None

    (witness, value), ms = _timed(run)
    return CheckResult(
        "trace-property", "pass" if witness is None else "fail", seed, algebra.field.name,
        getattr(algebra, "working_floor", None), witness, ms,
        {"pairs": len(pairs)} if witness is None else {"value": algebra.field.format(value)},
    )


def check_derivation_conditions(algebra: TracedAlgebra, family: DerivationFamily,
                                sample_count: int, seed: int, samples: Sequence | None = None) -> CheckResult:
    """Conditions (i)-(iii): trace kills D_k, [D_i,D_j] = ad Q_ij, cyclic D_k(Q_ij) sum vanishes."""
    rng = random.Random(seed)
    if samples is None:
        samples = [algebra.sample(rng) for _ in range(sample_count)]
    l = family.size
    fld = algebra.field

    def run():
        for a in samples:
            for k in range(1, l + 1):
                t = algebra.trace(family.apply(k, a))
                if not fld.is_zero(t):
                    return "i", {"D": family.names[k - 1], "a": algebra.format(a), "trace": fld.format(t)}
        for g in algebra.generators():
            for i in range(1, l + 1):
                for j in range(1, l + 1):
                    lhs = derivation_commutator(algebra, family, i, j, g)
                    rhs = algebra.bracket(family.q(i, j), g)
                    if not algebra.is_zero(algebra.sub(lhs, rhs)):
                        return "ii", {"pair": (i, j), "generator": algebra.format(g)}
        for i, j, k in itertools.product(range(1, l + 1), repeat=3):
            total = algebra.linear_combination([
                (fld.one, family.apply(k, family.q(i, j))),
                (fld.one, family.apply(i, family.q(j, k))),
                (fld.one, family.apply(j, family.q(k, i))),
            ])
            if not algebra.is_zero(total):
                return "iii", {"triple": (i, j, k), "value": algebra.format(total)}
        return None, None

    try:
        (cond, witness), ms = _timed(run)
    except PrecisionInsufficient as exc:
        return CheckResult("conditions-i-iii", "precision", seed, fld.name,
                           getattr(algebra, "working_floor", None), str(exc))
    status = "pass" if cond is None else "fail"
    details = {"samples": len(samples), "derivations": l}
    if cond:
        details["condition"] = cond
    return CheckResult("conditions-i-iii", status, seed, fld.name,
                       getattr(algebra, "working_floor", None), witness, ms, details)
