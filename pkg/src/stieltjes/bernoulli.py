"""Exact-rational Bernoulli numbers with a build-then-freeze cache.

The cache stores Fractions only.  Nothing in here ever rounds: a cached
entry is the mathematical B_n, so downstream consumers (Euler-Maclaurin
corrections, the Bernoulli closed form of zeta at even integers) can
convert to floating point exactly once, at their own working precision.
Repeated rounding of cached Bernoulli values is a known source of
silently wrong high-precision zeta values, which is the failure mode the
exactness contract exists to preclude.

Generation uses tangent numbers (integer Seidel-style recurrence), which
is O(M^2) big-integer additions for B_0..B_{2M}:

    T_1 = 1,  T_n = (n-1) T_{n-1},
    then for n = 2..M:  T_j = (j-n) T_{j-1} + (j-n+2) T_j  for j = n..M,
    B_{2n} = (-1)^(n-1) * 2n * T_n / (4^n (4^n - 1)).

Convention: B_1 = -1/2.  Only even-index values enter any formula here,
so the choice is cosmetic but fixed for determinism.
"""

from __future__ import annotations

import threading
from fractions import Fraction


class BernoulliCache:
    """Grow-only exact cache of B_0..B_{2M}; safe for concurrent reads.

    Writes happen under a lock and only ever extend the table, so readers
    that index within the already published range need no synchronisation.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._tangent: list[int] = [0, 1]  # T_1 = 1 at index 1
        self._bern: list[Fraction] = [Fraction(1), Fraction(-1, 2)]

    def number(self, n: int) -> Fraction:
        """Exact B_n (B_1 = -1/2, odd indices >= 3 vanish)."""
        if n < 0:
            raise ValueError("Bernoulli index must be >= 0")
        if n < 2:
            return self._bern[n]
        if n % 2 == 1:
            return Fraction(0)
        h = n // 2
        with self._lock:
            if len(self._tangent) - 1 < h:
                # the Seidel sweep is not incremental, so rebuild with
                # headroom; doubling keeps total work amortised O(final^2)
                target = max(h + 16, (len(self._tangent) - 1) * 2)
                self._tangent = _tangent_list(target)
            tn = self._tangent[h]
        return Fraction((-1) ** (h - 1) * n * tn, 4**h * (4**h - 1))

    def prefetch(self, n_max: int) -> None:
        """Make all B_0..B_{n_max} available before a read-heavy phase."""
        self.number(n_max if n_max % 2 == 0 else n_max + 1)


def _tangent_list(m: int) -> list[int]:
    """Tangent numbers T_1..T_m as a fresh list (index 0 unused)."""
    t = [0] * (m + 1)
    if m >= 1:
        t[1] = 1
    for n in range(2, m + 1):
        t[n] = (n - 1) * t[n - 1]
    for n in range(2, m + 1):
        for j in range(n, m + 1):
            t[j] = (j - n) * t[j - 1] + (j - n + 2) * t[j]
    return t


_cache = BernoulliCache()


def bernoulli_exact(n: int) -> Fraction:
    """Exact B_n from the shared process-wide cache."""
    return _cache.number(n)


def prefetch_bernoulli(n_max: int) -> None:
    _cache.prefetch(n_max)
