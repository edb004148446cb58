"""Slow reference implementations used only by the tests."""
import itertools

from liftcocycle.cohomology import perm_sign
from liftcocycle.lifting.schema import Bare, DApplied, Plain, QFactor, label_slots


def naive_schema(schema, alg, fam, args, mode):
    """Alternated trace of one schema by explicit enumeration of permutations."""
    word = schema.word
    fld = alg.field
    if mode == "fixed":
        labs = sorted({f.d for f in word if isinstance(f, (DApplied, Bare))})
    else:
        labs = sorted(set(label_slots(word)))
    total = fld.zero
    for sp in itertools.permutations(range(len(args))):
        ssign = perm_sign(sp)
        for lp in itertools.permutations(range(len(labs))):
            t = {labs[i]: labs[lp[i]] for i in range(len(labs))}
            if mode == "paired" and any(isinstance(f, QFactor) and t[f.i] > t[f.j] for f in word):
                continue
            vals = []
            for f in word:
                if isinstance(f, Plain):
                    vals.append(args[sp[f.a - 1]])
                elif isinstance(f, DApplied):
                    vals.append(fam.apply(t[f.d], args[sp[f.a - 1]]))
                elif isinstance(f, Bare):
                    vals.append(fam.inner[t[f.d] - 1])
                elif mode == "fixed":
                    vals.append(fam.q(f.i, f.j))
                else:
                    vals.append(fam.q(t[f.i], t[f.j]))
            acc = vals[0]
            for v in vals[1:]:
                acc = alg.mul(acc, v)
            total = total + ssign * perm_sign(lp) * alg.trace(acc)
    return total % fld.p if fld.p else total


def naive_evaluate(formula, alg, fam, args, mode=None):
    mode = mode or formula.mode
    fld = alg.field
    total = fld.zero
    for s in formula.schemas:
        total = total + fld(s.coeff) * naive_schema(s, alg, fam, args, mode)
    return total % fld.p if fld.p else total


def count_gapped_subsets(n, N):
    """N-subsets of 1..2n-1 with no two consecutive, by bitmask scan."""
    size = 2 * n - 1
    return sum(1 for mask in range(1 << size)
               if bin(mask).count("1") == N and not mask & (mask >> 1))
