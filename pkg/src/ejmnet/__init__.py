"""Exact simulation of closed quantum ring networks measured with the
generalized Elegant Joint Measurement."""

__version__ = "0.1.0"
