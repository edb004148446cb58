"""Command line: ``liftcocycle verify | eval | generate | suites``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import LiftCocycleError, ParseError, PrecisionInsufficient, UnknownFormula, UnknownSuite
from .lifting import builtin_formula, evaluate, generate_lifting_formula, loads
from .lifting.parallel import JOBS_ENV, default_jobs
from .poisson import PoissonAlgebra, psi0_density, psi_f_evaluate
from .psido import PsiDOAlgebra
from .report import dumps
from .scalars import field_from_spec
from .suites import DEFAULT_SUITES, OPT_IN, SUITES, SuiteConfig, run_suite


def _split_args(spec: str) -> list[str]:
    """A file with one element per line, or an inline list split on '|' (else ',')."""
    if os.path.isfile(spec):
        with open(spec) as fh:
            return [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    sep = "|" if "|" in spec else ","
    return [s.strip() for s in spec.split(sep)]


def _load_formula(name: str, mode: str | None):
    if os.path.isfile(name):
        with open(name) as fh:
            return loads(fh.read(), mode or "paired", os.path.basename(name))
    return builtin_formula(name, mode or "paired")


def cmd_verify(ns) -> int:
    cfg = SuiteConfig(ns.suite, ns.n, ns.order, ns.samples, ns.seed, ns.field, ns.jobs, ns.format, ns.checkpoint)
    header = {"suite": ns.suite, "n": ns.n, "order": ns.order, "samples": ns.samples, "seed": ns.seed,
              "field": ns.field or "suite default", "jobs": ns.jobs, "jobs_env": JOBS_ENV}
    results = run_suite(cfg)
    timing = not ns.no_timing
    if ns.format == "json":
        print(json.dumps({"config": header}, sort_keys=True))
    else:
        print("# " + " ".join(f"{k}={v}" for k, v in header.items()))
    print(dumps(results, "json" if ns.format == "json" else "text", timing))
    failed = [r for r in results if r.failed]
    if ns.format != "json":
        print(f"# {len(results) - len(failed)}/{len(results)} checks without failure")
    return 1 if failed else 0


def cmd_eval(ns) -> int:
    fld = field_from_spec(ns.field, ns.seed)
    texts = _split_args(ns.args)
    if ns.formula.lower() in ("psi0", "psi_0"):
        n = ns.n or 1
        P = PoissonAlgebra(n, fld)
        args = [P.parse(t) for t in texts]
        v = psi_f_evaluate(P, psi0_density(P), args)
        print(f"value: {fld.format(v)}")
        return 0
    formula = _load_formula(ns.formula, ns.mode)
    n = ns.n or max(1, formula.l // 2)
    A0 = PsiDOAlgebra(n, fld, 4)
    args = [A0.parse(t) for t in texts]
    if len(args) != formula.m:
        raise ParseError(f"{formula.name} takes {formula.m} arguments, got {len(args)}")
    A = A0.with_depth(ns.order or max(A0.depth_for(args), 2))
    v = evaluate(formula, A, A.log_family(), args, ns.mode, ns.jobs)
    print(f"value: {fld.format(v)}")
    print(f"floor: {list(A.working_floor)}")
    return 0


def cmd_generate(ns) -> int:
    f = generate_lifting_formula(ns.n, ns.mode or "paired")
    sys.stdout.write(f.dumps())
    return 0


def cmd_suites(ns) -> int:
    for name in SUITES:
        print(name + ("  (opt-in)" if name in OPT_IN else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="liftcocycle", description="Exact checks for trace-and-derivation cocycles.")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("verify", help="run a named suite ('all' runs every default suite)")
    v.add_argument("suite", help="suite name, or 'all'")
    v.add_argument("--n", type=int)
    v.add_argument("--order", type=int, help="truncation depth override")
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--field", help="rational | mod:P | random-prime")
    v.add_argument("--jobs", type=int, default=default_jobs(), help=f"workers (default from ${JOBS_ENV})")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--checkpoint", help="resume file for conjecture-n3")
    v.add_argument("--no-timing", action="store_true", help="omit runtimes so reruns are byte-identical")
    v.set_defaults(fn=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a formula at explicit arguments")
    e.add_argument("formula", help="psi3, psi5, psi5_tilde, psi_tilde:i, psiN, psi0, or a schema file")
    e.add_argument("--args", required=True, help="file (one element per line) or inline list")
    e.add_argument("--n", type=int)
    e.add_argument("--order", type=int)
    e.add_argument("--field", default="rational")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--mode", choices=("paired", "relabel", "fixed"))
    e.add_argument("--jobs", type=int, default=default_jobs())
    e.set_defaults(fn=cmd_eval)

    g = sub.add_parser("generate", help="print the marked-interval formula for n")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--mode", choices=("paired", "relabel", "fixed"))
    g.set_defaults(fn=cmd_generate)

    s = sub.add_parser("suites", help="list suite names")
    s.set_defaults(fn=cmd_suites)
    return p


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.fn(ns)
    except UnknownSuite as exc:
        print(f"error: unknown suite {exc.args[0]!r}; known: {', '.join(SUITES)}", file=sys.stderr)
        return 2
    except UnknownFormula as exc:
        print(f"error: unknown formula {exc.args[0]!r}", file=sys.stderr)
        return 2
    except PrecisionInsufficient as exc:
        print(f"precision: {exc}", file=sys.stderr)
        return 3
    except LiftCocycleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
