"""Exact engine for the A2 spider calculus and its subfactor double complex."""

__version__ = "0.1.0"
