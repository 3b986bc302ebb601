"""Exact-arithmetic verification of the 2-adic index computation showing that
the first Pontrjagin class of a homotopy CP(2k) differs from that of CP(2k)
by a multiple of 16."""

__version__ = "0.1.0"
