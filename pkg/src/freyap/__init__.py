"""Desk-scale verification toolkit for Frey-curve arguments on products of
consecutive terms of arithmetic progressions."""

__version__ = "0.1.0"
