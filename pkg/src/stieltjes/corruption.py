"""Finite-difference corruption scan for node tables.

The regularized zeta values lie on a smooth curve, so their order-n
finite differences must stay smooth too.  A single wrong digit in one
stored value, even hundreds of decimal places down, is amplified by the
binomial weights of the difference operator until it shows up as a
violent alternating-sign oscillation localised around the bad node.

The detector works per difference order:

1. take the order-n differences of the stored values,
2. find maximal sign-alternating runs (length >= ``min_run``); smooth
   stretches never alternate step by step, while both rounding noise and
   an injected error do,
3. compare each run's amplitudes against a robust baseline: the median
   magnitude over the run's surrounding context (or over the run itself
   when the run spans essentially the whole sequence, which is the
   uniform noise-floor regime),
4. flag contiguous positions exceeding ``factor`` times the baseline and
   translate them to node index ranges (a difference at position i
   involves nodes i..i+n).

Clean tables stay silent at the default factor of 10^3 because their
high-order differences are either smooth (no alternating runs) or a
uniform noise floor (no 10^3 excursions); a corrupted node towers above
either baseline by the ratio of the flipped digit's magnitude to the
node's rounding error.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .errors import DomainError
from .nodes import NodeTable, STORE_EXTRA
from .precision import digits_to_bits, working_bits

DEFAULT_FACTOR = 1000.0
DEFAULT_MIN_RUN = 5


@dataclass(frozen=True)
class ScanResult:
    """Ranges flagged per difference order; empty dict means clean."""

    flagged: dict[int, list[tuple[int, int]]]

    @property
    def is_clean(self) -> bool:
        return not any(self.flagged.values())

    def merged_ranges(self) -> list[tuple[int, int]]:
        spans = sorted(r for ranges in self.flagged.values() for r in ranges)
        merged: list[tuple[int, int]] = []
        for a, b in spans:
            if merged and a <= merged[-1][1] + 1:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return merged


def default_scan_orders(count: int) -> list[int]:
    """A spread of orders covering the detectable band for ``count`` nodes."""
    hi = count // 2
    lo = max(10, count // 10)
    if hi <= lo:
        return [max(2, hi)] if hi >= 2 else []
    step = max(1, (hi - lo) // 8)
    return list(range(lo, hi + 1, step))


def _sign(x: mpf) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    return 0


def _alternating_runs(diffs: list[mpf], min_run: int) -> list[tuple[int, int]]:
    signs = [_sign(d) for d in diffs]
    runs: list[tuple[int, int]] = []
    i = 0
    n = len(signs)
    while i < n - 1:
        if signs[i] != 0 and signs[i + 1] == -signs[i]:
            j = i + 1
            while j < n - 1 and signs[j + 1] != 0 and signs[j + 1] == -signs[j]:
                j += 1
            if j - i + 1 >= min_run:
                runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


def _median(values: list[mpf]) -> mpf:
    vals = sorted(values)
    return vals[len(vals) // 2]


def detect_corruption(
    table: NodeTable,
    order: int,
    *,
    factor: float = DEFAULT_FACTOR,
    min_run: int = DEFAULT_MIN_RUN,
) -> list[tuple[int, int]]:
    """Suspect node index ranges at one difference order (empty = clean)."""
    if order < 1:
        raise DomainError("difference order must be >= 1")
    if order >= table.count:
        raise DomainError(f"order {order} needs more than {order} nodes, table has {table.count}")
    result = scan_orders(table, [order], factor=factor, min_run=min_run)
    return result.flagged.get(order, [])


def scan_orders(
    table: NodeTable,
    orders: list[int] | None = None,
    *,
    factor: float = DEFAULT_FACTOR,
    min_run: int = DEFAULT_MIN_RUN,
) -> ScanResult:
    """Run the detector at several orders sharing one difference cascade."""
    if orders is None:
        orders = default_scan_orders(table.count)
    orders = sorted(set(orders))
    if not orders:
        return ScanResult({})
    if orders[0] < 1:
        raise DomainError("difference order must be >= 1")
    if orders[-1] >= table.count:
        raise DomainError(
            f"order {orders[-1]} needs more than {orders[-1]} nodes, table has {table.count}"
        )

    wanted = set(orders)
    flagged: dict[int, list[tuple[int, int]]] = {}
    with working_bits(digits_to_bits(table.digits + STORE_EXTRA)):
        diffs = table.values()
        for order in range(1, orders[-1] + 1):
            diffs = [diffs[i] - diffs[i + 1] for i in range(len(diffs) - 1)]
            if order in wanted:
                flagged[order] = _flag_one_order(diffs, order, factor, min_run)
    return ScanResult(flagged)


def _flag_one_order(
    diffs: list[mpf], order: int, factor: float, min_run: int
) -> list[tuple[int, int]]:
    n = len(diffs)
    out: list[tuple[int, int]] = []
    for a, b in _alternating_runs(diffs, min_run):
        run_len = b - a + 1
        window = max(2 * run_len, 50)
        context = [
            abs(diffs[t])
            for t in range(max(0, a - window), min(n, b + window + 1))
            if (t < a or t > b) and diffs[t] != 0
        ]
        if len(context) >= 10:
            baseline = _median(context)
        else:
            inside = [abs(diffs[t]) for t in range(a, b + 1) if diffs[t] != 0]
            if not inside:
                continue
            baseline = _median(inside)
        threshold = mpf(factor) * baseline
        hot = [t for t in range(a, b + 1) if abs(diffs[t]) > threshold]
        start = None
        prev = None
        for t in hot:
            if start is None:
                start = prev = t
            elif t == prev + 1:
                prev = t
            else:
                out.append((start, prev + order))
                start = prev = t
        if start is not None:
            out.append((start, prev + order))
    return out
