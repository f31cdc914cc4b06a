"""Vacuum-induced Berry phases of m-quantum Jaynes-Cummings models."""

__version__ = "0.1.0"
