"""Certified thermodynamic quantities over prefix-free program ensembles.

Enclosures come back as (lo, hi) pairs of exact dyadic strings such as
"3*2^-4"; use to_fraction to turn one end into a Fraction.
"""

from fractions import Fraction

from ._core import (
    Error,
    InvariantError,
    ParseError,
    PrecisionError,
    PreconditionError,
    RangeError,
    Snapshot,
    certify,
    enumerate,
    evaluate,
    load,
    run,
    solve,
)


def to_fraction(dyadic: str) -> Fraction:
    if "*2^" not in dyadic:
        return Fraction(int(dyadic))
    m, e = dyadic.split("*2^")
    return Fraction(int(m)) * Fraction(2) ** int(e)


def contains(pair, value) -> bool:
    lo, hi = pair
    return to_fraction(lo) <= Fraction(value) <= to_fraction(hi)
