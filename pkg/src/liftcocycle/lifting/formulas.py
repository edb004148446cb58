"""Marked intervals and the built-in lifting formulas."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..errors import UnknownFormula
from .schema import DApplied, LiftingFormula, Plain, QFactor, TermSchema, word

DEFAULT_MODE = "paired"


@dataclass(frozen=True)
class MarkedInterval:
    """Points 1..2n-1 of an interval of length 2n-2; mark i fuses D_i D_{i+1}."""

    n: int
    marks: tuple

    def __post_init__(self):
        marks = tuple(sorted(self.marks))
        object.__setattr__(self, "marks", marks)
        if not 1 <= len(marks) <= self.n:
            raise ValueError("need between 1 and n marks")
        if any(not 1 <= m <= 2 * self.n - 1 for m in marks):
            raise ValueError("marks must lie in 1..2n-1")
        if any(b - a < 2 for a, b in zip(marks, marks[1:])):
            raise ValueError("marks must be at distance >= 2")

    def __str__(self):
        return "".join("x" if i in self.marks else "." for i in range(1, 2 * self.n))


def enumerate_marked_intervals(n: int, N: int) -> list[MarkedInterval]:
    """All N-subsets of 1..2n-1 with pairwise gaps >= 2, in lexicographic order."""
    if not 1 <= N <= n:
        raise ValueError(f"N must be in 1..{n}")
    out = []

    def rec(start, chosen):
        if len(chosen) == N:
            out.append(MarkedInterval(n, tuple(chosen)))
            return
        for i in range(start, 2 * n):
            rec(i + 2, chosen + [i])

    rec(1, [])
    return out


def interval_to_schema(iv: MarkedInterval, coeff=1) -> TermSchema:
    n = iv.n
    factors = []
    j = 1
    while j <= 2 * n:
        if j in iv.marks:
            factors += [Plain(j), QFactor(j, j + 1), Plain(j + 1)]
            j += 2
        else:
            factors.append(DApplied(j, j))
            j += 1
    factors.append(Plain(2 * n + 1))
    return TermSchema(Fraction(coeff), tuple(factors))


def leading_schema(l: int, coeff=1) -> TermSchema:
    return TermSchema(Fraction(coeff), tuple(DApplied(k, k) for k in range(1, l + 1)) + (Plain(l + 1),))


def generate_lifting_formula(n: int, mode: str = DEFAULT_MODE) -> LiftingFormula:
    """Leading all-D term plus every marked-interval term, all with coefficient +1."""
    if n < 1:
        raise ValueError("n must be positive")
    schemas = [leading_schema(2 * n)]
    for N in range(1, n + 1):
        schemas += [interval_to_schema(iv) for iv in enumerate_marked_intervals(n, N)]
    return LiftingFormula(2 * n + 1, 2 * n, schemas, mode, f"psi{2 * n + 1}")


def psi3(mode: str = DEFAULT_MODE) -> LiftingFormula:
    return LiftingFormula(3, 2, [
        TermSchema(1, word("D1[A1]", "D2[A2]", "A3")),
        TermSchema(1, word("Q12", "A1", "A2", "A3")),
    ], mode, "psi3")


def psi_tilde(i: int, mode: str = DEFAULT_MODE) -> LiftingFormula:
    """Odd-degree family on one axis: Q term plus D1 A1 ... D2 A_{2r} terms."""
    if i < 2:
        raise UnknownFormula(f"psi_tilde needs i >= 2, got {i}")
    m = 2 * i + 1
    s, a_s = (i + 1, Fraction(1, 2)) if i % 2 == 0 else (i, Fraction(1))
    schemas = [TermSchema(1, (QFactor(1, 2),) + tuple(Plain(k) for k in range(1, m + 1)))]
    for pos in range(2, s + 2, 2):
        w = [DApplied(1, 1)]
        for k in range(2, m + 1):
            w.append(DApplied(2, k) if k == pos else Plain(k))
        schemas.append(TermSchema(a_s if pos == s + 1 else 1, tuple(w)))
    return LiftingFormula(m, 2, schemas, mode, f"psi_tilde({i})")


def psi5(mode: str = DEFAULT_MODE) -> LiftingFormula:
    rows = [
        "D1[A1] D2[A2] D3[A3] D4[A4] A5",
        "A1 Q12 A2 D3[A3] D4[A4] A5",
        "D1[A1] A2 Q23 A3 D4[A4] A5",
        "D1[A1] D2[A2] A3 Q34 A4 A5",
        "A1 Q12 A2 A3 Q34 A4 A5",
    ]
    return LiftingFormula(5, 4, [TermSchema(1, word(*r.split())) for r in rows], mode, "psi5")


def psi5_tilde(mode: str = DEFAULT_MODE) -> LiftingFormula:
    """The intermediate 5-cochain whose coboundary closes the n=2 argument.

    The leading term uses slot A2 for D2.  The product of
    commutators [Q21, A1][Q43, A2] is expanded into its four words.
    """
    rows = [
        (-2, "D1[A1] D2[A2] D3[A3] D4[A4] A5"),
        (1, "D1[A1] D2[A2] Q43 A3 A4 A5"),
        (1, "D1[A1] D2[A2] A3 A4 A5 Q43"),
        (2, "D1[A1] Q43 D2[A2] A3 A4 A5"),
        (-1, "D1[A1] A2 D2[A3] Q43 A4 A5"),
        (-1, "D1[A1] A2 D2[A3] A4 A5 Q43"),
        (-4, "Q21 Q43 A1 A2 A3 A4 A5"),
        (2, "Q21 A1 A2 Q43 A3 A4 A5"),
        (-2, "Q21 A1 Q43 A2 A3 A4 A5"),
        (2, "Q21 A1 A2 Q43 A3 A4 A5"),
        (2, "A1 Q21 Q43 A2 A3 A4 A5"),
        (-2, "A1 Q21 A2 Q43 A3 A4 A5"),
    ]
    return LiftingFormula(5, 4, [TermSchema(c, word(*r.split())) for c, r in rows], mode, "psi5_tilde")


_PSI_TILDE = "psi_tilde"


def builtin_formula(name: str, mode: str = DEFAULT_MODE) -> LiftingFormula:
    """``psi3``, ``psi5``, ``psi5_tilde``, ``psi_tilde(i)`` / ``psi_tilde:i``, ``psiN`` for odd N."""
    key = name.strip().lower().replace(" ", "")
    if key == "psi3":
        return psi3(mode)
    if key == "psi5":
        return psi5(mode)
    if key == "psi5_tilde":
        return psi5_tilde(mode)
    if key.startswith(_PSI_TILDE):
        rest = key[len(_PSI_TILDE):].strip("():")
        try:
            return psi_tilde(int(rest), mode)
        except ValueError:
            raise UnknownFormula(name) from None
    if key.startswith("psi") and key[3:].isdigit():
        m = int(key[3:])
        if m % 2 == 1 and m >= 3:
            return generate_lifting_formula((m - 1) // 2, mode)
    raise UnknownFormula(name)


def brute_force_interval_count(n: int, N: int) -> int:
    """Oracle: count N-subsets of 1..2n-1 with gaps >= 2 by exhaustive search."""
    return sum(
        1 for c in itertools.combinations(range(1, 2 * n), N)
        if all(b - a >= 2 for a, b in zip(c, c[1:]))
    )


def chain_lift(chain, algebra, probes=None, family=None) -> LiftingFormula:
    """All-D cochain sum_k a_k Alt Tr(D^(k)_1 A_1 ... D^(k)_i A_i A_{i+1}) of a cycle.

    Raises NotACycle when the chain boundary does not vanish on the probes.
    """
    from ..cohomology import chain_boundary
    from ..errors import NotACycle

    family = family or chain.family
    probes = list(probes) if probes is not None else algebra.generators()
    rep = chain_boundary(chain, algebra, probes, family)
    if rep.status != "pass":
        raise NotACycle(f"chain boundary is nonzero: {rep.witness}")
    i = chain.degree
    schemas = [TermSchema(Fraction(c), tuple(DApplied(d, k) for k, d in enumerate(labels, 1)) + (Plain(i + 1),))
               for c, labels in chain.terms]
    return LiftingFormula(i + 1, family.size, schemas, DEFAULT_MODE, f"lift{i + 1}")
