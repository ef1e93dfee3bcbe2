"""Coefficients A_k of the even-node zeta expansion, and their checks.

    A_k = sum_{j=0}^{k} (-1)^j C(k,j) (2j+1) zeta(2j+2)

with each zeta(2j+2) formed exactly-in-structure from the Bernoulli
closed form

    zeta(2j+2) = (1/2) (2pi)^(2j+2) |B_{2j+2}| / (2j+2)!,

i.e. an exact rational times a power of pi, so the only floating-point
error is the final evaluation.  The alternating sum hides 2^k
cancellation; the working precision carries k * log10(2) guard digits.

Batch computation uses the equivalent iterated-difference form: tabulate
g_j = (2j+1) zeta(2j+2) once, then A_k = ((I - shift) applied k times)
at j = 0, which evaluates the same binomial sum for every k <= K in
O(K^2) subtractions.

The sequence oscillates with slowly decreasing frequency; the
saddle-point asymptotic evaluated by ``ak_asymptotic`` tracks it,

    A_k ~ (4 pi^(3/2) / sqrt(3 kappa)) exp(-(3/2) kappa + pi^2/(4 kappa))
          cos(4 pi/3 - (3 sqrt3/2) kappa - sqrt3 pi^2/(4 kappa)),

    kappa = (pi^2 k)^(1/3).

Algebraic identities used as end-to-end checks (trivial zeros of zeta
and zeta(0) = -1/2, zeta'(0) = -log(2pi)/2):

    sum_k k^n A_k = (-1)^n / 2          (0^0 := 1),
    sum_k A_k H_k = 1 - log(2 pi).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mpf

from .bernoulli import bernoulli_exact, prefetch_bernoulli
from .bigreal import BigReal
from .errors import CapacityError, DomainError
from .precision import GUARD_DIGITS, digits_to_bits, working_bits

# |cos(phase)| above this makes the leading-order magnitude meaningful
COS_SAFE = 0.1


def _guard_bits(k: int, digits: int) -> int:
    # 2^k cancellation plus absolute headroom for the decayed magnitude
    return digits_to_bits(digits + GUARD_DIGITS + 10) + k + 40


def _zeta_even_rational(j: int) -> Fraction:
    """zeta(2j+2) / pi^(2j+2) as an exact rational."""
    b = bernoulli_exact(2 * j + 2)
    fact = 1
    for i in range(2, 2 * j + 3):
        fact *= i
    return Fraction(2 ** (2 * j + 1) * abs(b.numerator), b.denominator * fact)


def ak_exact(k: int, digits: int) -> BigReal:
    """Single A_k by the direct alternating binomial sum."""
    if k < 0:
        raise DomainError("k must be >= 0")
    if digits < 1:
        raise DomainError("digits must be >= 1")
    if digits > 10**6:
        raise CapacityError("requested digits beyond supported working precision")
    prefetch_bernoulli(2 * k + 2)
    prec = _guard_bits(k, digits)
    with working_bits(prec):
        pi2 = mpmath.pi**2
        binom = 1
        pi_pow = pi2
        acc = mpf(0)
        scale = mpf(0)
        for j in range(k + 1):
            coef = _zeta_even_rational(j) * (2 * j + 1) * binom
            term = (mpf(coef.numerator) / coef.denominator) * pi_pow
            acc = acc + term if j % 2 == 0 else acc - term
            scale += abs(term)
            binom = binom * (k - j) // (j + 1)
            pi_pow *= pi2
        err = (3 * k + 16) * mpf(2) ** (8 - prec) * max(scale, mpf(1))
        value = BigReal(acc, err)
        if value.usable_digits < digits and abs(acc) > 0:
            raise CapacityError(
                f"A_{k}: only {value.usable_digits} digits achievable at this guard"
            )
        return value


def ak_series(k_max: int, digits: int) -> list[BigReal]:
    """A_0..A_{k_max} via one difference cascade over g_j = (2j+1) zeta(2j+2)."""
    if k_max < 0:
        raise DomainError("k_max must be >= 0")
    prefetch_bernoulli(2 * k_max + 2)
    prec = _guard_bits(k_max, digits)
    with working_bits(prec):
        pi2 = mpmath.pi**2
        g: list[mpf] = []
        pi_pow = pi2
        for j in range(k_max + 1):
            coef = _zeta_even_rational(j) * (2 * j + 1)
            g.append((mpf(coef.numerator) / coef.denominator) * pi_pow)
            pi_pow *= pi2
        out = [g[0]]
        diffs = g
        for _ in range(k_max):
            diffs = [diffs[i] - diffs[i + 1] for i in range(len(diffs) - 1)]
            out.append(diffs[0])
        # rounding amplification is bounded by the binomial weight total 2^k
        err_unit = mpf(2) ** (10 - prec)
        gmax = max(abs(x) for x in g)
        return [
            BigReal(a, (k + 2) * mpf(2) ** k * gmax * err_unit)
            for k, a in enumerate(out)
        ]


def ak_asymptotic(k: int, digits: int) -> BigReal:
    """Leading-order saddle-point estimate of A_k (k >= 1)."""
    if k < 1:
        raise DomainError("asymptotic needs k >= 1")
    if digits < 1:
        raise DomainError("digits must be >= 1")
    with working_bits(digits_to_bits(digits + GUARD_DIGITS)):
        kappa = (mpmath.pi**2 * k) ** (mpf(1) / 3)
        amp = (
            4
            * mpmath.pi ** (mpf(3) / 2)
            / mpmath.sqrt(3 * kappa)
            * mpmath.exp(-mpf(3) / 2 * kappa + mpmath.pi**2 / (4 * kappa))
        )
        phase = (
            4 * mpmath.pi / 3
            - 3 * mpmath.sqrt(mpf(3)) / 2 * kappa
            - mpmath.sqrt(mpf(3)) * mpmath.pi**2 / (4 * kappa)
        )
        value = amp * mpmath.cos(phase)
        err = mpf(10) ** (-digits) * max(mpf(1), abs(value))
        return BigReal(value, err)


def cos_phase(k: int) -> float:
    """cos of the asymptotic phase, for the cos-safe subset test."""
    with working_bits(80):
        kappa = (mpmath.pi**2 * k) ** (mpf(1) / 3)
        phase = (
            4 * mpmath.pi / 3
            - 3 * mpmath.sqrt(mpf(3)) / 2 * kappa
            - mpmath.sqrt(mpf(3)) * mpmath.pi**2 / (4 * kappa)
        )
        return float(mpmath.cos(phase))


@dataclass(frozen=True)
class IdentityReport:
    k_used: int
    power_residuals: dict[int, mpf]  # n -> |sum k^n A_k - (-1)^n / 2|
    harmonic_residual: mpf  # |sum A_k H_k - (1 - log 2pi)|


def verify_identities(k_limit: int, n_max: int, digits: int) -> IdentityReport:
    """Partial-sum residuals of the A_k identities up to K = k_limit.

    Residuals for small n shrink as K grows; large-n residuals are
    reported as-is because those sums converge too slowly to assert
    anything at desk scale.
    """
    if k_limit < 1:
        raise DomainError("k_limit must be >= 1")
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    series = ak_series(k_limit, digits)
    prec = digits_to_bits(digits + GUARD_DIGITS) + n_max * (k_limit.bit_length() + 1) + 64
    with working_bits(prec):
        power_res: dict[int, mpf] = {}
        for n in range(n_max + 1):
            acc = mpf(0)
            for k, a in enumerate(series):
                kn = 1 if (k == 0 and n == 0) else k**n
                if kn:
                    acc += kn * a.value
            power_res[n] = abs(acc - mpf(-1) ** n / 2)
        h = mpf(0)
        acc = mpf(0)
        for k, a in enumerate(series):
            if k >= 1:
                h += mpf(1) / k
            acc += a.value * h
        harmonic = abs(acc - (1 - mpmath.ln(2 * mpmath.pi)))
    return IdentityReport(k_used=k_limit, power_residuals=power_res, harmonic_residual=harmonic)


def write_ak_csv(path: str | Path, k_max: int, digits: int) -> int:
    """Emit ``k, A_k_decimal, sign, asymptotic_decimal`` for plotting."""
    series = ak_series(k_max, digits)
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "A_k", "sign", "asymptotic"])
        for k, a in enumerate(series):
            asym = ak_asymptotic(k, digits) if k >= 1 else None
            writer.writerow(
                [
                    k,
                    mpmath.nstr(a.value, digits),
                    "+" if a.value > 0 else ("-" if a.value < 0 else "0"),
                    mpmath.nstr(asym.value, min(digits, 30)) if asym else "",
                ]
            )
    return len(series)
