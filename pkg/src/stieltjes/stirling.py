"""Signed Stirling numbers of the first kind as an exact integer triangle.

Recurrence (row k holds S_k^(n) for n = 0..k):

    S_0^(0) = 1,   S_k^(0) = 0 (k >= 1),
    S_{k+1}^(n) = S_k^(n-1) - k * S_k^(n).

The sign convention ties to the rising factorial:

    x (x+1) ... (x+k-1) = sum_n |S_k^(n)| x^n,

so row absolute sums equal k! (set x = 1).
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class StirlingTriangle:
    k_max: int
    rows: tuple[tuple[int, ...], ...]

    def entry(self, k: int, n: int) -> int:
        """S_k^(n); zero outside 0 <= n <= k."""
        if k < 0 or k > self.k_max:
            raise IndexError(f"row {k} outside triangle (k_max={self.k_max})")
        if n < 0 or n > k:
            return 0
        return self.rows[k][n]

    def abs_entry(self, k: int, n: int) -> int:
        return abs(self.entry(k, n))

    def row(self, k: int) -> tuple[int, ...]:
        return self.rows[k]


def stirling_signed(k_max: int) -> StirlingTriangle:
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    rows: list[tuple[int, ...]] = [(1,)]
    for k in range(k_max):
        prev = rows[k]
        nxt = [0] * (k + 2)
        for n in range(k + 2):
            above_left = prev[n - 1] if 1 <= n <= k + 1 else 0
            above = prev[n] if n <= k else 0
            nxt[n] = above_left - k * above
        rows.append(tuple(nxt))
    return StirlingTriangle(k_max=k_max, rows=tuple(rows))
