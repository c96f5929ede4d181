"""Executable number theory for Goldbach representations inside digitally restricted sets."""

__version__ = "0.1.0"
