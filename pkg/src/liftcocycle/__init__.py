"""Exact verification of lifting-formula cocycles on traced associative algebras."""
__version__ = "0.1.0"
