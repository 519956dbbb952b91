"""Exact toolkit for rational polynomials of simple type.

Builds, from the discrete classification data, the plumbing graph of the
divisor at infinity, the splice diagram of the link at infinity, the
explicit polynomial and its fibre/monodromy data, and checks them against
one another with exact arithmetic.
"""

__version__ = "0.1.0"
