"""Exact linking/knotting invariants and cycle-merging constructions for
piecewise-linear spatial graphs."""

__version__ = "0.1.0"
