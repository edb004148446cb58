"""Square matrices over an exact field, and gl_m-valued Laurent currents."""
from __future__ import annotations

import random
import re
from typing import Sequence

from .errors import ParseError
from .framework import DerivationFamily, TracedAlgebra, inner_family
from .scalars import QQ

Matrix = tuple  # tuple of row tuples


class MatrixAlgebra(TracedAlgebra):
    name = "matrix"

    def __init__(self, m: int = 3, field=QQ):
        super().__init__(field)
        self.m = m

    def _red(self, rows) -> Matrix:
        p = self.field.p
        if p:
            return tuple(tuple(v % p for v in r) for r in rows)
        return tuple(tuple(r) for r in rows)

    def from_rows(self, rows: Sequence[Sequence]) -> Matrix:
        if len(rows) != self.m or any(len(r) != self.m for r in rows):
            raise ValueError(f"need a {self.m}x{self.m} matrix")
        return tuple(tuple(self.field(v) for v in r) for r in rows)

    def unit(self, i: int, j: int, c=1) -> Matrix:
        """E_ij (1-based)."""
        z = self.field.zero
        return tuple(tuple(self.field(c) if (r, s) == (i - 1, j - 1) else z for s in range(self.m))
                     for r in range(self.m))

    def zero(self) -> Matrix:
        return tuple((self.field.zero,) * self.m for _ in range(self.m))

    def one(self) -> Matrix:
        return tuple(tuple(self.field.one if r == s else self.field.zero for s in range(self.m))
                     for r in range(self.m))

    def linear_combination(self, pairs) -> Matrix:
        m = self.m
        out = [[0] * m for _ in range(m)]
        for c, a in pairs:
            for r in range(m):
                row, arow = out[r], a[r]
                for s in range(m):
                    row[s] += c * arow[s]
        return self._red(out)

    def mul(self, a: Matrix, b: Matrix, floor=None) -> Matrix:
        m = self.m
        cols = list(zip(*b))
        return self._red([[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a])

    def trace(self, a: Matrix):
        t = sum(a[i][i] for i in range(self.m))
        return t % self.field.p if self.field.p else t

    def is_zero(self, a: Matrix) -> bool:
        return all(v == 0 for row in a for v in row)

    def monomials(self, a: Matrix):
        return [((r, s), a[r][s]) for r in range(self.m) for s in range(self.m) if a[r][s] != 0]

    def generators(self) -> list:
        return [self.unit(i, j) for i in range(1, self.m + 1) for j in range(1, self.m + 1)]

    def sample(self, rng: random.Random, lo: int = -3, hi: int = 3) -> Matrix:
        """Dense random matrix; over a prime field the entries are uniform residues."""
        p = self.field.p
        if p:
            return tuple(tuple(rng.randrange(p) for _ in range(self.m)) for _ in range(self.m))
        return tuple(tuple(self.field(rng.randint(lo, hi)) for _ in range(self.m)) for _ in range(self.m))

    def format(self, a: Matrix) -> str:
        f = self.field
        fmt = (lambda v: str(f.symmetric(v))) if f.p else (lambda v: str(v))
        return "; ".join(" ".join(fmt(v) for v in row) for row in a)

    def parse(self, text: str) -> Matrix:
        """Row-major literal: rows separated by ';', entries by spaces or commas."""
        rows = [r for r in re.split(r"[;\n]", text.strip().strip("[]")) if r.strip()]
        try:
            vals = [[self.field(v) for v in re.split(r"[\s,]+", r.strip().strip("[]")) if v] for r in rows]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad matrix literal {text!r}") from exc
        if len(vals) != self.m or any(len(r) != self.m for r in vals):
            raise ParseError(f"matrix literal is not {self.m}x{self.m}")
        return tuple(tuple(r) for r in vals)

    def inner_family(self, elements: Sequence[Matrix]) -> DerivationFamily:
        return inner_family(self, elements, [f"ad(M{k + 1})" for k in range(len(elements))])


class CurrentAlgebra(TracedAlgebra):
    """gl_m (x) Laurent polynomials in t1..tk, with trace Res_t o Tr_gl."""

    name = "current"

    def __init__(self, m: int = 2, k: int = 1, field=QQ):
        super().__init__(field)
        self.mat = MatrixAlgebra(m, field)
        self.m = m
        self.k = k

    def element(self, pieces: dict) -> dict:
        """{loop exponent tuple: matrix} with zero matrices dropped."""
        return {tuple(e): a for e, a in pieces.items() if not self.mat.is_zero(a)}

    def current(self, mat: Matrix, *exps) -> dict:
        if len(exps) != self.k:
            raise ValueError(f"need {self.k} loop exponents")
        return self.element({tuple(exps): mat})

    def zero(self) -> dict:
        return {}

    def one(self) -> dict:
        return {(0,) * self.k: self.mat.one()}

    def linear_combination(self, pairs) -> dict:
        acc: dict = {}
        for c, a in pairs:
            for e, mat in a.items():
                acc.setdefault(e, []).append((c, mat))
        return self.element({e: self.mat.linear_combination(v) for e, v in acc.items()})

    def mul(self, a: dict, b: dict, floor=None) -> dict:
        acc: dict = {}
        for e1, m1 in a.items():
            for e2, m2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                acc.setdefault(e, []).append((self.field.one, self.mat.mul(m1, m2)))
        return self.element({e: self.mat.linear_combination(v) for e, v in acc.items()})

    def current_trace(self, a: dict):
        mat = a.get((-1,) * self.k)
        return self.field.zero if mat is None else self.mat.trace(mat)

    def trace(self, a):
        return self.current_trace(a)

    def is_zero(self, a) -> bool:
        return not a

    def monomials(self, a):
        return [((e, rs), v) for e, mat in a.items() for rs, v in self.mat.monomials(mat)]

    def loop_derivative(self, axis: int, a: dict) -> dict:
        """d/dt_axis (1-based)."""
        i = axis - 1
        out = {}
        for e, mat in a.items():
            if e[i]:
                ee = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ee] = self.mat.linear_combination([(self.field(e[i]), mat)])
        return self.element(out)

    def derivation_family(self) -> DerivationFamily:
        maps = [(lambda a, ax=ax: self.loop_derivative(ax, a)) for ax in range(1, self.k + 1)]
        return DerivationFamily.with_antisymmetric_q(self, [f"d/dt{ax}" for ax in range(1, self.k + 1)], maps, {})

    def generators(self) -> list:
        out = []
        for E in self.mat.generators():
            for ax in range(self.k):
                for s in (-1, 1):
                    e = [0] * self.k
                    e[ax] = s
                    out.append(self.current(E, *e))
        return out

    def sample(self, rng: random.Random, max_terms: int = 2, lo: int = -2, hi: int = 2) -> dict:
        pieces = {}
        for _ in range(rng.randint(1, max_terms)):
            e = tuple(rng.randint(lo, hi) for _ in range(self.k))
            mat = self.mat.unit(rng.randint(1, self.m), rng.randint(1, self.m), rng.randint(1, 4))
            pieces[e] = self.mat.add(pieces[e], mat) if e in pieces else mat
        return self.element(pieces)

    def format(self, a: dict) -> str:
        if not a:
            return "0"
        parts = []
        for e in sorted(a):
            t = " ".join(f"t{i + 1}^{x}" for i, x in enumerate(e) if x)
            parts.append(f"[{self.mat.format(a[e])}]" + (f" {t}" if t else ""))
        return " + ".join(parts)


def current_trace(alg: CurrentAlgebra, a):
    return alg.current_trace(a)


def loop_derivative(alg: CurrentAlgebra, axis: int, a):
    return alg.loop_derivative(axis, a)
