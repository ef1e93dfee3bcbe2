"""Arbitrary-precision zeta(s) for real s > 0 and the regularized f(s).

Two independent evaluation routes are kept deliberately separate so each
can act as an oracle for the other:

* ``zeta_em``  -- classical Euler-Maclaurin summation with exact-rational
  Bernoulli corrections and a rigorous remainder bound,

      zeta(s) = sum_{n<N} n^-s + N^-s/2 + N^(1-s)/(s-1)
              + sum_{j<=M} B_2j/(2j)! (s)_{2j-1} N^(-s-2j+1) + R,

      |R| <= 2 zeta(2M+1)/(2pi)^(2M+1) * (s)_{2M+1} * N^(-s-2M)/(s+2M).

* ``zeta_eta`` -- the alternating series eta(s) = sum (-1)^(n+1) n^-s
  accelerated Cohen-Rodriguez Villegas-Zagier style (Chebyshev weights),
  then zeta = eta / (1 - 2^(1-s)).  For totally monotone terms, n
  acceleration steps leave an error below 2 (3+sqrt 8)^-n.

The regularized function

      f(s) = zeta(s) - 1/(s-1)   (s != 1),     f(1) = euler gamma

is entire; the s = 1 branch gets its own Euler-Maclaurin harmonic-sum
algorithm rather than a limit.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
from mpmath import mpf

from .bernoulli import bernoulli_exact, prefetch_bernoulli
from .bigreal import BigReal
from .errors import DomainError
from .precision import GUARD_DIGITS, Real, digits_to_bits, to_mpf, working_bits


def _as_exact(s: Real | BigReal) -> Fraction | mpf:
    """Accept exact scalar forms for s; reject inexact BigReal inputs."""
    if isinstance(s, BigReal):
        if s.abs_err != 0:
            raise DomainError("zeta evaluation needs an exact argument; got abs_err > 0")
        return s.value
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        return Fraction(s)  # floats are exact binary rationals
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, mpf):
        return s
    raise DomainError(f"unsupported argument type {type(s)!r}")


def _check_domain(s_exact: Fraction | mpf) -> None:
    if s_exact <= 0:
        raise DomainError("zeta(s) supported for real s > 0 only")
    if s_exact == 1:
        raise DomainError("zeta(s) has a pole at s = 1")


def _em_log10_remainder(s: mpf, n_len: int, m_ord: int) -> float:
    """log10 of the rigorous Euler-Maclaurin remainder bound (cheap, 60-bit)."""
    with working_bits(60):
        two_pi = 2 * mpmath.pi
        lb = mpmath.ln(mpf("1.21")) + mpmath.ln(2) - (2 * m_ord + 1) * mpmath.ln(two_pi)
        lrf = mpf(0)
        for i in range(2 * m_ord + 1):
            lrf += mpmath.ln(s + i)
        lb += lrf + (-s - 2 * m_ord) * mpmath.ln(n_len) - mpmath.ln(s + 2 * m_ord)
        return float(lb / mpmath.ln(10))


def zeta_em(s: Real | BigReal, target_digits: int) -> BigReal:
    """zeta(s) by Euler-Maclaurin, abs_err <= 10^-target * max(1, |zeta|)."""
    if target_digits < 1:
        raise DomainError("target_digits must be >= 1")
    s_exact = _as_exact(s)
    _check_domain(s_exact)

    p_abs = target_digits + 2
    prec = digits_to_bits(target_digits + GUARD_DIGITS)
    with working_bits(prec):
        sm = to_mpf(s_exact)
        n_len = m_ord = max(8, int(0.54 * p_abs) + 2)
        # heuristic start, then the rigorous bound has the final say
        while _em_log10_remainder(sm, n_len, m_ord) > -p_abs:
            n_len = int(n_len * 1.25) + 1
            m_ord = int(m_ord * 1.25) + 1
        prefetch_bernoulli(2 * m_ord)

        acc = mpf(0)
        for n in range(1, n_len):
            acc += mpmath.power(n, -sm)
        acc += mpmath.power(n_len, -sm) / 2
        if isinstance(s_exact, Fraction):
            pole = s_exact - 1
            acc += mpmath.power(n_len, 1 - sm) * pole.denominator / pole.numerator
        else:
            acc += mpmath.power(n_len, 1 - sm) / (sm - 1)

        rising = sm  # (s)_1
        npow = mpmath.power(n_len, -sm - 1)
        nsq_inv = mpf(n_len) ** (-2)
        fact = 2  # (2j)! at j = 1
        for j in range(1, m_ord + 1):
            b = bernoulli_exact(2 * j)
            acc += (mpf(b.numerator) / b.denominator) / fact * rising * npow
            rising *= (sm + (2 * j - 1)) * (sm + 2 * j)
            npow *= nsq_inv
            fact *= (2 * j + 1) * (2 * j + 2)

        bound = mpf(10) ** _em_log10_remainder(sm, n_len, m_ord)
        # fold in summation round-off: every term is O(max(1,|acc|)) relative
        rounding = (n_len + m_ord + 8) * mpf(2) ** (8 - prec) * max(mpf(1), abs(acc))
        return BigReal(acc, bound + rounding)


def zeta_eta(s: Real | BigReal, target_digits: int) -> BigReal:
    """zeta(s) via the accelerated alternating (eta) series.

    Deliberately shares nothing with zeta_em beyond the working-precision
    plumbing: no Bernoulli numbers, no Euler-Maclaurin tail.
    """
    if target_digits < 1:
        raise DomainError("target_digits must be >= 1")
    s_exact = _as_exact(s)
    _check_domain(s_exact)

    # amplification from dividing by 1 - 2^(1-s), large near the pole
    with working_bits(60):
        s0 = to_mpf(s_exact)
        denom = abs(1 - mpmath.power(2, 1 - s0))
        amp = max(0, int(-mpmath.log10(denom)) + 1) if denom < 1 else 0

    p_abs = target_digits + 2 + amp
    prec = digits_to_bits(p_abs + GUARD_DIGITS)
    with working_bits(prec):
        sm = to_mpf(s_exact)
        # 2 (3+sqrt 8)^-n <= 10^-(p_abs + GUARD/2)
        n = int((p_abs + GUARD_DIGITS / 2) * 2.302585 / 1.7627472) + 6
        big = mpmath.power(3 + 2 * mpmath.sqrt(mpf(2)), n)
        big = (big + 1 / big) / 2
        b = mpf(-1)
        c = -big
        acc = mpf(0)
        for k in range(n):
            c = b - c
            acc += c * mpmath.power(k + 1, -sm)
            b = b * (k + n) * (k - n) / ((k + mpf(1) / 2) * (k + 1))
        eta = acc / big
        denom = 1 - mpmath.power(2, 1 - sm)
        value = eta / denom
        series_err = 2 * mpmath.power(3 + 2 * mpmath.sqrt(mpf(2)), -n) / abs(denom)
        rounding = (n + 8) * mpf(2) ** (8 - prec) * max(mpf(1), abs(value))
        return BigReal(value, series_err + rounding)


def euler_gamma_em(target_digits: int) -> BigReal:
    """Euler-Mascheroni constant via Euler-Maclaurin on the harmonic sum.

        gamma = H_N - ln N - 1/(2N) + sum_{j<=M} B_2j/(2j) N^-2j + R,
        |R| <= |B_{2M+2}| / ((2M+2) N^(2M+2))

    (1/x is completely monotone, so the remainder is enveloped by the
    first omitted correction term).
    """
    if target_digits < 1:
        raise DomainError("target_digits must be >= 1")
    p_abs = target_digits + 2
    prec = digits_to_bits(target_digits + GUARD_DIGITS)

    def log10_tail(n_len: int, m_ord: int) -> float:
        b = bernoulli_exact(2 * m_ord + 2)
        with working_bits(60):
            lb = (
                mpmath.ln(mpf(abs(b.numerator)))
                - mpmath.ln(mpf(b.denominator))
                - mpmath.ln(mpf(2 * m_ord + 2))
                - (2 * m_ord + 2) * mpmath.ln(mpf(n_len))
            )
            return float(lb / mpmath.ln(10))

    n_len = m_ord = max(8, int(0.54 * p_abs) + 2)
    while log10_tail(n_len, m_ord) > -p_abs:
        n_len = int(n_len * 1.25) + 1
        m_ord = int(m_ord * 1.25) + 1
    prefetch_bernoulli(2 * m_ord + 2)

    with working_bits(prec):
        h = mpf(0)
        for k in range(1, n_len + 1):
            h += mpf(1) / k
        g = h - mpmath.ln(mpf(n_len)) - mpf(1) / (2 * n_len)
        nsq_inv = mpf(n_len) ** (-2)
        npow = nsq_inv
        for j in range(1, m_ord + 1):
            b = bernoulli_exact(2 * j)
            g += (mpf(b.numerator) / b.denominator) / (2 * j) * npow
            npow *= nsq_inv
        bound = mpf(10) ** log10_tail(n_len, m_ord)
        rounding = (n_len + m_ord + 8) * mpf(2) ** (8 - prec)
        return BigReal(g, bound + rounding)


def f_reg(s: Real | BigReal, target_digits: int) -> BigReal:
    """Regularized zeta f(s) = zeta(s) - 1/(s-1), with f(1) = gamma.

    Requires s >= 1 (the tabulation grid); the subtraction is performed
    against the exact rational pole term whenever s is rational, so the
    only error source is the zeta evaluation itself.
    """
    if target_digits < 1:
        raise DomainError("target_digits must be >= 1")
    s_exact = _as_exact(s)
    if s_exact < 1:
        raise DomainError("f_reg(s) supported for s >= 1 only")
    if s_exact == 1:
        return euler_gamma_em(target_digits)

    if isinstance(s_exact, Fraction):
        pole = Fraction(1) / (s_exact - 1)
    else:
        pole = None

    # zeta needs extra relative digits when 1/(s-1) dwarfs f(s) ~ O(1)
    with working_bits(60):
        mag = abs(to_mpf(pole)) if pole is not None else abs(1 / (to_mpf(s_exact) - 1))
        extra = max(0, int(mpmath.log10(mag)) + 1) if mag > 1 else 0

    z = zeta_em(s_exact, target_digits + extra + 2)
    prec = digits_to_bits(target_digits + extra + GUARD_DIGITS)
    with working_bits(prec):
        if pole is not None:
            value = z.value - mpf(pole.numerator) / pole.denominator
        else:
            value = z.value - 1 / (to_mpf(s_exact) - 1)
        err = z.abs_err + mpf(2) ** (4 - prec) * max(mpf(1), abs(value))
        return BigReal(value, err)
