"""Exact coefficient fields.

Two fields are supported: the rationals (values are ``fractions.Fraction``)
and prime fields GF(p) (values are Python ints in ``range(p)``).  Hot loops
read ``field.p`` directly and reduce with ``% p`` when it is set, so both
fields share one arithmetic path.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Union

import sympy

from .errors import NotInvertible, ParseError

Scalar = Union[Fraction, int]


class RationalField:
    p = None
    name = "rational"

    def __call__(self, x) -> Fraction:
        if isinstance(x, str):
            try:
                return Fraction(x.strip())
            except ValueError as exc:
                raise ParseError(f"bad rational literal {x!r}") from exc
        return Fraction(x)

    zero = Fraction(0)
    one = Fraction(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def inv(self, x) -> Fraction:
        if x == 0:
            raise NotInvertible("division by zero")
        return 1 / Fraction(x)

    def format(self, x) -> str:
        return str(Fraction(x))

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "RationalField()"


class PrimeField:
    """GF(p).  Reducing a rational requires its denominator to be a unit."""

    def __init__(self, p: int):
        if p < 3 or not sympy.isprime(p):
            raise ValueError(f"{p} is not an odd prime")
        self.p = p
        self.name = f"mod:{p}"
        self.zero = 0
        self.one = 1

    def __call__(self, x) -> int:
        p = self.p
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            x = RationalField()(x)
        x = Fraction(x)
        den = x.denominator % p
        if den == 0:
            raise NotInvertible(f"denominator {x.denominator} vanishes mod {p}")
        return x.numerator * pow(den, -1, p) % p

    def is_zero(self, x) -> bool:
        return x % self.p == 0

    def inv(self, x) -> int:
        if x % self.p == 0:
            raise NotInvertible("division by zero")
        return pow(x, -1, self.p)

    def format(self, x) -> str:
        return str(x % self.p)

    def symmetric(self, x) -> int:
        x %= self.p
        return x - self.p if x > self.p // 2 else x

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = RationalField()


def random_prime(seed: int, bits: int = 31) -> int:
    """Deterministic prime in [2**bits, 2**(bits+1)) chosen from ``seed``."""
    rng = random.Random(f"prime:{seed}")
    start = rng.randrange(2**bits, 2 ** (bits + 1) - 2**20)
    return int(sympy.nextprime(start))


def field_from_spec(spec: str, seed: int = 0):
    """Parse ``rational``, ``mod:P`` or ``random-prime``."""
    spec = spec.strip()
    if spec in ("rational", "QQ", "q"):
        return QQ
    if spec.startswith("mod:"):
        return PrimeField(int(spec[4:]))
    if spec == "random-prime":
        return PrimeField(random_prime(seed))
    raise ParseError(f"unknown field {spec!r}")


def rational_reconstruct(a: int, p: int, bound: int | None = None) -> Fraction | None:
    """Smallest-height fraction congruent to ``a`` mod ``p`` (or None)."""
    if bound is None:
        bound = int((p // 2) ** 0.5)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)
