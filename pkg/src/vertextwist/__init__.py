"""Exact formal calculus and identity verification for twisted modules
over grading-restricted vertex superalgebras."""

__version__ = "0.1.0"
