"""Exact workbench for braided Hopf algebras, Sweedler cohomology and
braided crossed products over the rationals."""

__version__ = "0.1.0"
