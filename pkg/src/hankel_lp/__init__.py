"""Finite Hankel transforms: partial-fraction expansions, sampling
reconstruction, zero localization, and Laguerre-Polya classification of
1F2 parameter triples."""

__version__ = "0.1.0"
