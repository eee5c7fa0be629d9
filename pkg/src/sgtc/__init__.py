"""sgtc: exact-arithmetic torsion obstruction engine for super G-structures."""

__version__ = "0.1.0"
