"""Slow, deliberately naive reference computations for tests.

These exist to be independent of the main pipeline, not to be fast:
``gamma_limit_oracle`` is the raw limit definition

    gamma_n ~ sum_{k=1}^{m} (ln k)^n / k  -  (ln m)^(n+1) / (n+1),

summed term by term with no acceleration (0^0 := 1 covers the n = 0,
k = 1 term), and ``zeta_cross_check`` pits the two zeta evaluation
routes against each other digit by digit.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .bigreal import BigReal
from .errors import DomainError
from .precision import GUARD_DIGITS, Real, digits_to_bits, floor_log10, working_bits
from .zeta import f_reg, zeta_em, zeta_eta


def gamma_limit_oracle(n: int, m: int, digits: int = 30) -> BigReal:
    """Partial-limit value of gamma_n after m terms, at ``digits`` precision.

    The reported abs_err covers summation round-off only; the distance to
    the true limit (the oracle's convergence error, O(log^n m / m)) is
    exactly what callers want to observe, so it is not folded in.
    """
    if n < 0:
        raise DomainError("n must be >= 0")
    if m < 1:
        raise DomainError("m must be >= 1")
    prec = digits_to_bits(digits + GUARD_DIGITS // 2)
    with working_bits(prec):
        acc = mpf(1) if n == 0 else mpf(0)  # k = 1 term, 0^0 := 1
        for k in range(2, m + 1):
            lk = mpmath.ln(k)
            acc += lk**n / k
        acc -= mpmath.ln(m) ** (n + 1) / (n + 1)
        rounding = (m + 4) * mpf(2) ** (6 - prec) * max(mpf(1), abs(acc))
        return BigReal(acc, rounding)


@dataclass(frozen=True)
class CrossCheckEntry:
    s: object
    em: BigReal
    eta: BigReal
    agreement_digits: int


@dataclass(frozen=True)
class CrossCheckReport:
    target_digits: int
    entries: list[CrossCheckEntry]

    @property
    def worst_agreement(self) -> int:
        return min(e.agreement_digits for e in self.entries)

    @property
    def passed(self) -> bool:
        return self.worst_agreement >= self.target_digits - 5


def zeta_cross_check(s_list: list[Real], digits: int) -> CrossCheckReport:
    """Digit-level agreement between zeta_em and zeta_eta at each s."""
    entries = []
    for s in s_list:
        em = zeta_em(s, digits)
        eta = zeta_eta(s, digits)
        with working_bits(digits_to_bits(digits + GUARD_DIGITS)):
            delta = abs(em.value - eta.value)
            scale = max(abs(em.value), abs(eta.value))
            if delta == 0:
                agreement = digits + GUARD_DIGITS
            else:
                agreement = max(0, floor_log10(scale / delta))
        entries.append(CrossCheckEntry(s=s, em=em, eta=eta, agreement_digits=agreement))
    return CrossCheckReport(target_digits=digits, entries=entries)


def f_reg_consistency(s: Real, digits: int) -> int:
    """Agreement digits of f_reg(s) + 1/(s-1) against zeta_em(s)."""
    from fractions import Fraction

    s_frac = Fraction(s) if not isinstance(s, Fraction) else s
    if s_frac == 1:
        raise DomainError("consistency check needs s != 1")
    f = f_reg(s_frac, digits)
    z = zeta_em(s_frac, digits)
    pole = Fraction(1) / (s_frac - 1)
    with working_bits(digits_to_bits(digits + GUARD_DIGITS)):
        recon = f.value + mpf(pole.numerator) / pole.denominator
        delta = abs(recon - z.value)
        if delta == 0:
            return digits + GUARD_DIGITS
        return max(0, floor_log10(abs(z.value) / delta))
