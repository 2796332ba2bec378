"""Frobenius splitting checks for the punctual Hilbert scheme chart around ``<x, y^n>``."""

__version__ = "0.1.0"
