"""Working-precision plumbing shared by every numeric module.

All computation runs on mpmath's arbitrary-precision reals.  mpmath keeps
its precision in a process-global context, so a module lock serialises
precision-scoped blocks; worker parallelism happens across processes
(each with its own interpreter), never across threads inside one context.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Union

import mpmath
from mpmath import mpf

Real = Union[int, float, str, Fraction, mpf]

# bits per decimal digit, rounded up a hair
_LN10_LN2 = 3.3220

# guard digits carried by every internal computation beyond the target
GUARD_DIGITS = 20

_prec_lock = threading.RLock()


def digits_to_bits(digits: int) -> int:
    return int(digits * _LN10_LN2) + 12


@contextmanager
def working_digits(digits: int) -> Iterator[None]:
    """Scope mpmath to ``digits`` decimal digits (plus rounding headroom)."""
    with _prec_lock:
        with mpmath.workprec(digits_to_bits(digits)):
            yield


@contextmanager
def working_bits(bits: int) -> Iterator[None]:
    with _prec_lock:
        with mpmath.workprec(bits):
            yield


def to_mpf(x: Real) -> mpf:
    """Convert an exact scalar to mpf at the current working precision.

    Fractions go through one correctly rounded division; dyadic rationals
    and integers convert exactly.
    """
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, (int, str)):
        return mpf(x)
    return mpf(x)


def decimal_str(x: mpf, sig_digits: int) -> str:
    """Correctly rounded decimal string with ``sig_digits`` significant digits."""
    return mpmath.nstr(
        x, sig_digits, strip_zeros=False, min_fixed=-4, max_fixed=21
    )


def parse_decimal(text: str, digits: int) -> mpf:
    """Parse a decimal literal at the canonical precision for ``digits``.

    The same (text, digits) pair always yields the same bits, which is what
    makes text round-trips byte-stable.
    """
    with working_bits(digits_to_bits(digits)):
        return mpf(text)


def floor_log10(x: mpf) -> int:
    """floor(log10(x)) for x > 0, exact at digit boundaries."""
    if x <= 0:
        raise ValueError("floor_log10 requires x > 0")
    e = int(mpmath.floor(mpmath.log10(x)))
    # guard against log10 landing a hair under an integer
    for cand in (e + 1, e, e - 1):
        if mpf(10) ** cand <= x:
            return cand
    return e - 1
