"""Arbitrary-precision real values carrying a rigorous absolute error bound.

The single precision currency used everywhere is the usable digit count

    usable = floor(log10(|value| / abs_err))   when |value| > abs_err,
    usable = 0                                 otherwise.

Every published value in the pipeline is a BigReal, and every contract
("agrees to d digits", "guaranteed digits") is stated in this unit.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .precision import decimal_str, floor_log10


@dataclass(frozen=True)
class BigReal:
    value: mpf
    abs_err: mpf

    def __post_init__(self) -> None:
        if self.abs_err < 0:
            raise ValueError("abs_err must be >= 0")

    @property
    def usable_digits(self) -> int:
        av = abs(self.value)
        if self.abs_err == 0:
            # exact value: digit count is unbounded, report a sentinel
            return 10**9 if av > 0 else 0
        if av <= self.abs_err:
            return 0
        return max(0, floor_log10(av / self.abs_err))

    def to_str(self, sig_digits: int | None = None) -> str:
        n = sig_digits if sig_digits is not None else max(self.usable_digits, 1)
        return decimal_str(self.value, min(n, 10**6))

    def agrees_with(self, other: "BigReal | mpf", digits: int) -> bool:
        """Relative agreement to ``digits`` digits, boundary-tolerant.

        Two rigorous values whose bounds both certify ``digits`` digits
        satisfy |a - b| <= 2 * 10^-digits * max(|a|, |b|); this is the
        test form of "all declared digits agree".
        """
        ov = other.value if isinstance(other, BigReal) else other
        scale = max(abs(self.value), abs(ov))
        return abs(self.value - ov) <= 2 * mpf(10) ** (-digits) * scale

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"BigReal({mpmath.nstr(self.value, 12)}, err~{mpmath.nstr(self.abs_err, 3)})"
