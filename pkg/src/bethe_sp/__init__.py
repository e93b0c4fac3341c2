"""Numerical algebraic Bethe ansatz: monodromy, factorizing operator and scalar-product formulas."""
__version__ = "0.1.0"
