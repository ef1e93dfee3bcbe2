"""The main pipeline: alternating binomial differences and Stieltjes sums.

Step 2 forms the coefficients

    alpha_k = sum_{j=0}^{k} (-1)^j C(k,j) f(1 + j eps),

whose binomial weights amplify the node error bound u to 2^k u, so each
alpha_k loses roughly log10(2) digits per index on top of its own decay.
The cutoff k0 is the last index with at least one usable digit.

Step 3 sums them against exact Stirling weights.  Writing the Laurent
coefficients of zeta about s = 1 as (-1)^n gamma_n / n! (so gamma_1 < 0),
the inversion of the Newton series comes out with all-positive weights:

    gamma_n = (n! / eps^n) sum_{k=n}^{k0} |S_k^(n)| alpha_k / k!.

(The equivalent signed form (-1)^k S_k^(n) with a global (-1)^n absorbed
is more error-prone; the absolute-value form makes the audited sign of
gamma_1 automatic.)

The published error bound per gamma_n has two parts:

* propagation: sum_k beta_nk err(alpha_k) with beta_nk the exact rational
  weight n! |S_k^(n)| / (k! eps^n),
* truncation: the Newton tail beyond k0 is bounded by the first omitted
  term.  When alpha_{k0+1} exists conceptually but is noise (usable
  digits hit zero), |alpha_{k0+1}| <= 10 err + err; when the table simply
  ran out of nodes first, the last measured alpha bounds the envelope.
  A tail factor covers the geometric decay of subsequent terms, which is
  the same near-linear digit-loss behaviour the k0 definition relies on.

Every emitted GammaResult carries >= 1 guaranteed digit; anything weaker
is refused with a capacity error naming the fix (more source digits).
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from mpmath import mpf

from .bigreal import BigReal
from .corruption import ScanResult, scan_orders
from .errors import CapacityError, CorruptionError, DomainError, FormatError
from .nodes import NodeTable, STORE_EXTRA
from .precision import decimal_str, digits_to_bits, parse_decimal, working_bits
from .stirling import StirlingTriangle, stirling_signed

ALPHA_FORMAT_TAG = "# stieltjes-alpha-series v1"
GAMMA_FORMAT_TAG = "# stieltjes-gamma-results v1"

# |alpha_{k0+1}| <= (10 + 1) * err(alpha_{k0+1}) when its usable digits are 0
NOISE_CAP = 11
# geometric-tail headroom on the first omitted Newton term
TAIL_FACTOR = 3


@dataclass(frozen=True)
class AlphaSeries:
    eps: Fraction
    source_digits: int
    alphas: tuple[BigReal, ...]
    k0: int
    exhausted: bool
    last_alpha_mag: mpf  # |alpha_k0| measured, used by the truncation bound

    @property
    def node_err(self) -> mpf:
        return mpf(10) ** (-(self.source_digits + 1))

    def usable(self, k: int) -> int:
        return self.alphas[k].usable_digits


@dataclass(frozen=True)
class GammaResult:
    n: int
    value: BigReal
    guaranteed_digits: int
    eps_used: Fraction
    k0_used: int


def compute_alphas(
    table: NodeTable,
    *,
    corruption_check: bool = True,
    scan: ScanResult | None = None,
) -> AlphaSeries:
    """Alternating binomial differences of the node values, cut at k0.

    Refuses corrupted tables: a single wrong digit anywhere in the stored
    values wrecks every alpha_k with k past the bad node, so the scan
    runs first unless explicitly disabled (or a prior scan is supplied).
    """
    if corruption_check:
        result = scan if scan is not None else scan_orders(table)
        if not result.is_clean:
            raise CorruptionError(
                f"node table failed corruption scan at orders "
                f"{sorted(o for o, r in result.flagged.items() if r)}; "
                "recompute the flagged nodes before differencing",
                result.flagged,
            )

    u = table.max_abs_err
    values = table.values()
    base_bits = digits_to_bits(table.digits + STORE_EXTRA)

    alphas: list[BigReal] = []
    exhausted = True
    row = [1]  # Pascal row C(k, j)
    for k in range(table.count):
        with working_bits(base_bits + k + 32):
            acc = mpf(0)
            for j, binom in enumerate(row):
                term = mpf(binom) * values[j]
                acc = acc + term if j % 2 == 0 else acc - term
        err = mpf(2) ** k * u
        alpha = BigReal(acc, err)
        if alpha.usable_digits <= 0:
            exhausted = False
            break
        alphas.append(alpha)
        row = [1] + [row[i] + row[i + 1] for i in range(len(row) - 1)] + [1]
    if not alphas:
        raise CapacityError(
            "no alpha coefficient has a usable digit; increase table digits"
        )
    k0 = len(alphas) - 1
    return AlphaSeries(
        eps=table.eps,
        source_digits=table.digits,
        alphas=tuple(alphas),
        k0=k0,
        exhausted=exhausted,
        last_alpha_mag=abs(alphas[-1].value),
    )


def _beta_weight(n: int, k: int, eps: Fraction, triangle: StirlingTriangle) -> Fraction:
    """Exact beta_nk = n! |S_k^(n)| / (k! eps^n)."""
    return Fraction(
        math.factorial(n) * triangle.abs_entry(k, n), math.factorial(k)
    ) / eps**n


def gamma_n(alphas: AlphaSeries, triangle: StirlingTriangle, n: int) -> GammaResult:
    """One Stieltjes constant from the alpha series, with certified digits."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n > alphas.k0:
        raise CapacityError(
            f"gamma_{n} is out of reach: cutoff k0={alphas.k0}; "
            f"increase source digits (roughly {_digits_hint(alphas, n)} needed)"
        )
    if triangle.k_max < alphas.k0 + 1:
        raise DomainError(
            f"Stirling triangle too small: need k_max >= {alphas.k0 + 1}"
        )
    result = _gamma_batch(alphas, triangle, [n])[0]
    if result is None:
        raise CapacityError(
            f"gamma_{n} has no guaranteed digits at source precision "
            f"{alphas.source_digits}; increase table digits"
        )
    return result


def gamma_all(alphas: AlphaSeries, triangle: StirlingTriangle) -> list[GammaResult]:
    """Every certifiable gamma_n for n = 0..k0, sharing factorial work."""
    if triangle.k_max < alphas.k0 + 1:
        raise DomainError(
            f"Stirling triangle too small: need k_max >= {alphas.k0 + 1}"
        )
    maybe = _gamma_batch(alphas, triangle, list(range(alphas.k0 + 1)))
    return [r for r in maybe if r is not None]


def _gamma_batch(
    alphas: AlphaSeries, triangle: StirlingTriangle, ns: list[int]
) -> list[GammaResult | None]:
    eps = alphas.eps
    k0 = alphas.k0
    u = alphas.node_err
    prec = digits_to_bits(alphas.source_digits + 10) + k0 + 64

    fact = [1] * (k0 + 2)
    for i in range(1, k0 + 2):
        fact[i] = fact[i - 1] * i

    out: list[GammaResult | None] = []
    with working_bits(prec):
        pow2u = [mpf(2) ** k * u for k in range(k0 + 2)]
        for n in ns:
            if n > k0:
                out.append(None)
                continue
            eps_pow = eps**n
            scale = Fraction(fact[n]) / eps_pow
            acc = mpf(0)
            err = mpf(0)
            for k in range(n, k0 + 1):
                w = Fraction(triangle.abs_entry(k, n), fact[k])
                wm = mpf(w.numerator) / w.denominator
                acc += wm * alphas.alphas[k].value
                err += wm * pow2u[k]
            # first omitted Newton term bounds the truncation tail
            w_next = Fraction(triangle.abs_entry(k0 + 1, n), fact[k0 + 1])
            wm_next = mpf(w_next.numerator) / w_next.denominator
            if alphas.exhausted:
                cap = alphas.last_alpha_mag + pow2u[k0]
            else:
                cap = NOISE_CAP * pow2u[k0 + 1]
            err += wm_next * cap * TAIL_FACTOR

            scale_m = mpf(scale.numerator) / scale.denominator
            value = BigReal(scale_m * acc, scale_m * err * (1 + mpf(2) ** (16 - prec)))
            guaranteed = value.usable_digits
            if guaranteed < 1:
                out.append(None)
                continue
            out.append(
                GammaResult(
                    n=n,
                    value=value,
                    guaranteed_digits=guaranteed,
                    eps_used=eps,
                    k0_used=k0,
                )
            )
    return out


def gamma_from_alphas_exact(
    alpha_values: list[Fraction], n: int, eps: Fraction, triangle: StirlingTriangle
) -> Fraction:
    """Exact-rational gamma sum for rational alpha stand-ins.

    The beta matrix is exact, so with exact inputs the whole map is exact
    and linear; tests use this to pin the split between exact structure
    and propagated alpha error.
    """
    k0 = len(alpha_values) - 1
    total = Fraction(0)
    for k in range(n, k0 + 1):
        total += _beta_weight(n, k, eps, triangle) * alpha_values[k]
    return total


def _digits_hint(alphas: AlphaSeries, n: int) -> int:
    # digit loss per index is near-linear; extrapolate the observed slope
    per_k = (alphas.source_digits + 1) / max(1, alphas.k0 + 1)
    return int(per_k * (n + 2))


# ---------------------------------------------------------------------------
# serialization (same header + records family as node tables)


def save_alphas(series: AlphaSeries, path: str | Path) -> None:
    lines = [
        ALPHA_FORMAT_TAG + "\n",
        f"# eps {series.eps.numerator}/{series.eps.denominator}\n",
        f"# source_digits {series.source_digits}\n",
        f"# k0 {series.k0}\n",
        f"# exhausted {int(series.exhausted)}\n",
        f"# count {len(series.alphas)}\n",
    ]
    for k, alpha in enumerate(series.alphas):
        lines.append(
            f"{k}\t{decimal_str(alpha.value, series.source_digits + STORE_EXTRA)}"
            f"\t{alpha.usable_digits}\n"
        )
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(out.parent), prefix=".tmp_alpha_")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    os.replace(tmp, out)


def load_alphas(path: str | Path) -> AlphaSeries:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != ALPHA_FORMAT_TAG:
        raise FormatError(f"{path}: not an alpha series file")
    meta: dict[str, str] = {}
    body = []
    for line in lines[1:]:
        if line.startswith("# "):
            key, _, val = line[2:].partition(" ")
            meta[key] = val
        elif line.strip():
            body.append(line)
    try:
        eps = Fraction(meta["eps"])
        digits = int(meta["source_digits"])
        k0 = int(meta["k0"])
        exhausted = bool(int(meta.get("exhausted", "0")))
        count = int(meta["count"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: bad or missing header ({exc})") from exc
    if count != k0 + 1:
        raise FormatError(f"{path}: count {count} does not match k0 {k0}")
    u = mpf(10) ** (-(digits + 1))
    alphas: list[BigReal] = []
    for lineno, line in enumerate(body, start=1):
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(f"{path}: record {lineno}: expected 3 fields")
        k = int(parts[0])
        if k != len(alphas):
            raise FormatError(f"{path}: record {lineno}: alpha index out of order")
        value = parse_decimal(parts[1], digits + STORE_EXTRA)
        alphas.append(BigReal(value, mpf(2) ** k * u))
    if len(alphas) != count:
        raise FormatError(f"{path}: truncated alpha series")
    return AlphaSeries(
        eps=eps,
        source_digits=digits,
        alphas=tuple(alphas),
        k0=k0,
        exhausted=exhausted,
        last_alpha_mag=abs(alphas[-1].value),
    )


def save_gammas(
    results: list[GammaResult], path: str | Path, *, tool_version: str, source_digits: int
) -> None:
    if not results:
        raise DomainError("no gamma results to save")
    eps = results[0].eps_used
    k0 = results[0].k0_used
    lines = [
        GAMMA_FORMAT_TAG + "\n",
        f"# tool stieltjes {tool_version}\n",
        f"# eps {eps.numerator}/{eps.denominator}\n",
        f"# source_digits {source_digits}\n",
        f"# k0 {k0}\n",
        f"# count {len(results)}\n",
    ]
    for r in results:
        lines.append(
            f"{r.n}\t{decimal_str(r.value.value, max(r.guaranteed_digits, 1))}"
            f"\t{r.guaranteed_digits}\n"
        )
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(out.parent), prefix=".tmp_gamma_")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    os.replace(tmp, out)
