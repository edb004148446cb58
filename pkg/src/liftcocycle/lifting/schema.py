"""Term schemas: words of factors with a coefficient, and their text form.

A word is read left to right as a product inside the trace.  Factors are

* ``DApplied(d, a)`` -- derivation D_d applied to argument slot a  (``D3[A3]``)
* ``Plain(a)``       -- argument slot a                          (``A1``)
* ``QFactor(i, j)``  -- the element Q_ij of the derivation family  (``Q12``)

Serialized formulas put one schema per line: ``<coeff> * <factor> ...``.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ..errors import ParseError


@dataclass(frozen=True)
class DApplied:
    d: int
    a: int

    def __str__(self):
        return f"D{self.d}[A{self.a}]"


@dataclass(frozen=True)
class Plain:
    a: int

    def __str__(self):
        return f"A{self.a}"


@dataclass(frozen=True)
class Bare:
    """The element M_d itself (inner families only)."""

    d: int

    def __str__(self):
        return f"D{self.d}"


@dataclass(frozen=True)
class QFactor:
    i: int
    j: int

    def __str__(self):
        if self.i < 10 and self.j < 10:
            return f"Q{self.i}{self.j}"
        return f"Q{{{self.i},{self.j}}}"


def arg_slots(word) -> list[int]:
    return [f.a for f in word if isinstance(f, (DApplied, Plain))]


def label_slots(word) -> list[int]:
    out = []
    for f in word:
        if isinstance(f, (DApplied, Bare)):
            out.append(f.d)
        elif isinstance(f, QFactor):
            out += [f.i, f.j]
    return out


@dataclass(frozen=True)
class TermSchema:
    coeff: Fraction
    word: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "word", tuple(self.word))
        slots = arg_slots(self.word)
        if len(set(slots)) != len(slots):
            raise ValueError(f"argument slot repeated in {self}")

    @property
    def arity(self) -> int:
        return len(arg_slots(self.word))

    @property
    def q_degree(self) -> int:
        return sum(isinstance(f, QFactor) for f in self.word)

    def shape(self) -> tuple:
        return tuple(self.word)

    def __str__(self):
        return f"{self.coeff} * " + " ".join(str(f) for f in self.word)


@dataclass
class LiftingFormula:
    """Weighted schemas over ``m`` argument slots and ``l`` derivation labels.

    Arguments are always alternated.  ``mode`` says how derivation labels are
    alternated (see :mod:`liftcocycle.lifting.evaluate`).
    """

    m: int
    l: int
    schemas: list[TermSchema]
    mode: str = "paired"
    name: str = ""
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        for s in self.schemas:
            if sorted(arg_slots(s.word)) != list(range(1, self.m + 1)):
                raise ValueError(f"schema {s} does not use slots 1..{self.m} exactly once")

    def multiset(self) -> Counter:
        return Counter((s.coeff, s.shape()) for s in self.schemas)

    def dumps(self) -> str:
        return "\n".join(str(s) for s in self.schemas) + "\n"


_FACTOR = re.compile(r"D(\d+)\[A(\d+)\]|A(\d+)|Q(\d)(\d)|Q\{(\d+),(\d+)\}|D(\d+)")


def parse_factor(tok: str):
    m = _FACTOR.fullmatch(tok)
    if not m:
        raise ParseError(f"bad factor {tok!r}")
    g = m.groups()
    if g[0]:
        return DApplied(int(g[0]), int(g[1]))
    if g[2]:
        return Plain(int(g[2]))
    if g[3]:
        return QFactor(int(g[3]), int(g[4]))
    if g[5]:
        return QFactor(int(g[5]), int(g[6]))
    return Bare(int(g[7]))


def parse_schema(line: str) -> TermSchema:
    coeff, sep, rest = line.partition("*")
    if not sep:
        raise ParseError(f"missing '*' in schema line {line!r}")
    try:
        c = Fraction(coeff.strip())
    except ValueError as exc:
        raise ParseError(f"bad coefficient in {line!r}") from exc
    return TermSchema(c, tuple(parse_factor(t) for t in rest.split()))


def loads(text: str, mode: str = "paired", name: str = "") -> LiftingFormula:
    schemas = [parse_schema(ln) for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not schemas:
        raise ParseError("no schemas")
    m = schemas[0].arity
    l = max((max(label_slots(s.word), default=0) for s in schemas), default=0)
    return LiftingFormula(m, l, schemas, mode, name)


def word(*factors: Iterable) -> tuple:
    """Build a word from compact tokens, e.g. ``word("D1[A1]", "A2", "Q12")``."""
    return tuple(parse_factor(t) if isinstance(t, str) else t for t in factors)
