"""Lifting formulas: schemas, generators and the alternation evaluator."""
from .evaluate import MODES, evaluate, schema_value
from .formulas import (
    DEFAULT_MODE,
    MarkedInterval,
    brute_force_interval_count,
    builtin_formula,
    enumerate_marked_intervals,
    generate_lifting_formula,
    interval_to_schema,
    leading_schema,
    psi3,
    psi5,
    psi5_tilde,
    psi_tilde,
)
from .schema import Bare, DApplied, LiftingFormula, Plain, QFactor, TermSchema, loads, parse_schema

__all__ = [
    "MODES", "evaluate", "schema_value", "DEFAULT_MODE", "MarkedInterval", "brute_force_interval_count",
    "builtin_formula", "enumerate_marked_intervals", "generate_lifting_formula", "interval_to_schema",
    "leading_schema", "psi3", "psi5", "psi5_tilde", "psi_tilde", "Bare", "DApplied", "LiftingFormula",
    "Plain", "QFactor", "TermSchema", "loads", "parse_schema",
]
