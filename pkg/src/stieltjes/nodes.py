"""Tabulation and persistence of the equidistant grid f(1 + j*eps).

This is the expensive step of the pipeline, so it is built around three
operational contracts:

* determinism -- the table contents depend only on (eps, count, digits),
  never on worker count or scheduling; files are byte-identical,
* checkpointing -- work lands in per-block shard files written
  atomically, so an interrupted run resumes without recomputation,
* exact round-trips -- values are canonicalised to the stored decimal
  form at tabulation time, so save -> load -> save is byte-stable.

File format (UTF-8 text, greppable and diffable):

    # stieltjes-node-table v1
    # eps 1/64
    # digits 200
    # count 400
    0<TAB>1<TAB>0.57721566...
    1<TAB>1.015625<TAB>0.57836...

with one record per node, s_j written exactly (dyadic grids give finite
decimals; other rationals fall back to a p/q literal) and f_j carrying
digits + 5 significant decimals.

Every stored f_j is assigned the table-wide canonical error bound
10^-(digits+1).  Tabulation computes to a few digits beyond that and
verifies the margin, so the bound is rigorous with room to spare, and
the alpha-stage error model u = max abs_err is a single exact constant.
"""

from __future__ import annotations

import multiprocessing
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from mpmath import mpf

from .bigreal import BigReal
from .errors import DomainError, FormatError
from .precision import decimal_str, parse_decimal
from .zeta import f_reg

FORMAT_TAG = "# stieltjes-node-table v1"
DEFAULT_SHARD = 256

# extra decimals stored beyond the target precision
STORE_EXTRA = 5
# computation margin: evaluate to digits + MARGIN, certify digits + 1
COMPUTE_MARGIN = 6


def canonical_err(digits: int) -> mpf:
    return mpf(10) ** (-(digits + 1))


@dataclass(frozen=True)
class Node:
    j: int
    s: Fraction
    f: BigReal


@dataclass(frozen=True)
class NodeTable:
    eps: Fraction
    count: int
    digits: int
    nodes: tuple[Node, ...]

    def __post_init__(self) -> None:
        if self.eps <= 0:
            raise DomainError("eps must be > 0")
        if len(self.nodes) != self.count:
            raise FormatError(f"table claims {self.count} nodes, has {len(self.nodes)}")
        for idx, node in enumerate(self.nodes):
            if node.j != idx:
                raise FormatError(f"node index gap at position {idx} (found j={node.j})")

    @property
    def max_abs_err(self) -> mpf:
        return canonical_err(self.digits)

    def values(self) -> list[mpf]:
        return [n.f.value for n in self.nodes]


def _eps_literal(eps: Fraction) -> str:
    return f"{eps.numerator}/{eps.denominator}"


def _s_literal(s: Fraction) -> str:
    """Exact text for a grid point: finite decimal if dyadic-ish, else p/q."""
    den = s.denominator
    two = 0
    while den % 2 == 0:
        den //= 2
        two += 1
    five = 0
    while den % 5 == 0:
        den //= 5
        five += 1
    if den == 1:
        places = max(two, five)
        scaled = s * 10**places
        text = str(scaled.numerator // scaled.denominator)
        if places == 0:
            return text
        text = text.rjust(places + 1, "0")
        return f"{text[:-places]}.{text[-places:]}"
    return f"{s.numerator}/{s.denominator}"


def _parse_s_literal(text: str) -> Fraction:
    return Fraction(text)


def _node_value_str(j: int, eps: Fraction, digits: int) -> str:
    """Compute one node and return its canonical stored decimal."""
    s = 1 + j * eps
    f = f_reg(s, digits + COMPUTE_MARGIN)
    if f.abs_err > canonical_err(digits) / 1000:
        raise DomainError(
            f"node j={j}: achieved error {f.abs_err} too large for canonical bound"
        )
    return decimal_str(f.value, digits + STORE_EXTRA)


def _record_line(j: int, eps: Fraction, digits: int, value_text: str) -> str:
    return f"{j}\t{_s_literal(1 + j * eps)}\t{value_text}\n"


def _node_from_stored(j: int, s: Fraction, text: str, digits: int) -> Node:
    value = parse_decimal(text, digits + STORE_EXTRA)
    return Node(j, s, BigReal(value, canonical_err(digits)))


def _header_lines(eps: Fraction, count: int, digits: int) -> list[str]:
    return [
        FORMAT_TAG + "\n",
        f"# eps {_eps_literal(eps)}\n",
        f"# digits {digits}\n",
        f"# count {count}\n",
    ]


# ---------------------------------------------------------------------------
# tabulation with shard checkpoints


def _shard_path(parts_dir: Path, start: int, stop: int) -> Path:
    return parts_dir / f"shard_{start:08d}_{stop:08d}.tsv"


def _shard_header(start: int, stop: int, eps: Fraction, digits: int) -> str:
    return f"# shard {start} {stop} eps={_eps_literal(eps)} digits={digits}"


def _compute_shard(args: tuple[int, int, str, int, str]) -> str:
    start, stop, eps_text, digits, parts_dir = args
    eps = Fraction(eps_text)
    path = _shard_path(Path(parts_dir), start, stop)
    if _shard_valid(path, start, stop, eps, digits):
        return str(path)
    lines = [_shard_header(start, stop, eps, digits) + "\n"]
    for j in range(start, stop):
        lines.append(_record_line(j, eps, digits, _node_value_str(j, eps, digits)))
    fd, tmp = tempfile.mkstemp(dir=str(parts_dir), prefix=".tmp_shard_")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    os.replace(tmp, path)
    return str(path)


def _shard_valid(path: Path, start: int, stop: int, eps: Fraction, digits: int) -> bool:
    if not path.exists():
        return False
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError:
        return False
    if len(lines) != 1 + (stop - start) or lines[0] != _shard_header(start, stop, eps, digits):
        return False
    for offset, line in enumerate(lines[1:]):
        if not line.startswith(f"{start + offset}\t"):
            return False
    return True


def tabulate(
    eps: Fraction,
    count: int,
    digits: int,
    workers: int = 1,
    *,
    checkpoint_dir: str | Path | None = None,
    shard_size: int = DEFAULT_SHARD,
    progress=None,
) -> NodeTable:
    """Tabulate f(1 + j*eps) for j = 0..count-1 at ``digits`` precision.

    Output is bit-identical for any ``workers`` value.  When
    ``checkpoint_dir`` is given, completed shards survive interruption and
    a rerun with the same parameters resumes from them.
    """
    if eps <= 0:
        raise DomainError("eps must be > 0")
    if count < 1:
        raise DomainError("count must be >= 1")
    if digits < 10:
        raise DomainError("digits must be >= 10")
    if workers < 1:
        raise DomainError("workers must be >= 1")

    spans = [(a, min(a + shard_size, count)) for a in range(0, count, shard_size)]

    if checkpoint_dir is None:
        tmp_ctx = tempfile.TemporaryDirectory(prefix="stieltjes_parts_")
        parts_dir = Path(tmp_ctx.name)
    else:
        tmp_ctx = None
        parts_dir = Path(checkpoint_dir)
        parts_dir.mkdir(parents=True, exist_ok=True)

    try:
        jobs = [(a, b, _eps_literal(eps), digits, str(parts_dir)) for a, b in spans]
        if workers == 1 or len(jobs) == 1:
            for idx, job in enumerate(jobs):
                _compute_shard(job)
                if progress is not None:
                    progress(min((idx + 1) * shard_size, count), count)
        else:
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(processes=workers) as pool:
                for idx, _ in enumerate(pool.imap(_compute_shard, jobs)):
                    if progress is not None:
                        progress(min((idx + 1) * shard_size, count), count)

        nodes: list[Node] = []
        for a, b in spans:
            path = _shard_path(parts_dir, a, b)
            lines = path.read_text(encoding="utf-8").splitlines()
            for offset, line in enumerate(lines[1:]):
                j_text, s_text, f_text = line.split("\t")
                nodes.append(
                    _node_from_stored(int(j_text), _parse_s_literal(s_text), f_text, digits)
                )
        return NodeTable(eps=eps, count=count, digits=digits, nodes=tuple(nodes))
    finally:
        if tmp_ctx is not None:
            tmp_ctx.cleanup()


def completed_shards(
    checkpoint_dir: str | Path,
    eps: Fraction,
    count: int,
    digits: int,
    shard_size: int = DEFAULT_SHARD,
) -> list[tuple[int, int]]:
    """Spans already present and valid in a checkpoint directory."""
    parts_dir = Path(checkpoint_dir)
    done = []
    for a in range(0, count, shard_size):
        b = min(a + shard_size, count)
        if _shard_valid(_shard_path(parts_dir, a, b), a, b, eps, digits):
            done.append((a, b))
    return done


# ---------------------------------------------------------------------------
# persistence


def save_table(table: NodeTable, path: str | Path) -> None:
    lines = _header_lines(table.eps, table.count, table.digits)
    for node in table.nodes:
        lines.append(
            f"{node.j}\t{_s_literal(node.s)}\t{decimal_str(node.f.value, table.digits + STORE_EXTRA)}\n"
        )
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=str(out.parent), prefix=".tmp_table_")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        fh.writelines(lines)
    os.replace(tmp, out)


def load_table(path: str | Path) -> NodeTable:
    """Load a table, accepting both the native format and PARI brace output."""
    text = Path(path).read_text(encoding="utf-8")
    first = text.lstrip()[:1]
    if first == "{":
        return _load_pari(text, path)
    return _load_native(text, path)


def _load_native(text: str, path: str | Path) -> NodeTable:
    lines = text.splitlines()
    if not lines or lines[0] != FORMAT_TAG:
        raise FormatError(f"{path}: not a node table (missing format tag)")
    meta: dict[str, str] = {}
    body_start = 1
    for i, line in enumerate(lines[1:], start=1):
        if not line.startswith("# "):
            body_start = i
            break
        key, _, val = line[2:].partition(" ")
        meta[key] = val
        body_start = i + 1
    try:
        eps = Fraction(meta["eps"])
        digits = int(meta["digits"])
        count = int(meta["count"])
    except (KeyError, ValueError) as exc:
        raise FormatError(f"{path}: bad or missing header ({exc})") from exc

    nodes: list[Node] = []
    for lineno, line in enumerate(lines[body_start:], start=body_start + 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(f"{path}:{lineno}: expected 3 tab-separated fields")
        try:
            j = int(parts[0])
            s = _parse_s_literal(parts[1])
            node = _node_from_stored(j, s, parts[2], digits)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"{path}:{lineno}: unparseable record ({exc})") from exc
        if j != len(nodes):
            raise FormatError(
                f"{path}:{lineno}: node j={j} out of order; last complete node is j={len(nodes) - 1}"
            )
        if s != 1 + j * eps:
            raise FormatError(f"{path}:{lineno}: s_j does not equal 1 + j*eps")
        nodes.append(node)
    if len(nodes) != count:
        raise FormatError(
            f"{path}: truncated table: header promises {count} nodes, "
            f"last complete node is j={len(nodes) - 1}"
        )
    return NodeTable(eps=eps, count=count, digits=digits, nodes=tuple(nodes))


def _load_pari(text: str, path: str | Path) -> NodeTable:
    """Ingest brace-delimited records ``{s, f},`` as written by a PARI loop.

    The grid step is recovered exactly from the s literals; the stored
    precision is inferred from the shortest f mantissa (minus the storage
    extra), matching the native format's conventions.
    """
    records: list[tuple[Fraction, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if not line.startswith("{"):
            raise FormatError(f"{path}:{lineno}: expected a brace-delimited record")
        line = line[1:]
        line = line.rstrip(",").rstrip()
        if not line.endswith("}"):
            raise FormatError(f"{path}:{lineno}: unterminated record")
        line = line[:-1]
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise FormatError(f"{path}:{lineno}: expected two comma-separated values")
        try:
            s = Fraction(parts[0])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: bad s value ({exc})") from exc
        records.append((s, parts[1]))
    if not records:
        raise FormatError(f"{path}: no records")

    steps = sorted({s - 1 for s, _ in records if s != 1})
    if steps:
        eps = steps[0]
        for other in steps[1:]:
            eps = Fraction(_frac_gcd(eps, other))
    else:
        raise FormatError(f"{path}: cannot infer eps from a single s=1 record")

    sig = min(_mantissa_digits(f) for _, f in records)
    digits = max(10, sig - STORE_EXTRA)

    nodes = []
    for s, f_text in sorted(records, key=lambda r: r[0]):
        ratio = (s - 1) / eps
        if ratio.denominator != 1:
            raise FormatError(f"{path}: s={s} is not on the inferred grid eps={eps}")
        j = int(ratio)
        nodes.append(_node_from_stored(j, s, f_text, digits))
    table = NodeTable(eps=eps, count=len(nodes), digits=digits, nodes=tuple(nodes))
    return table


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    import math

    num = math.gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    den = a.denominator * b.denominator
    return Fraction(num, den)


def _mantissa_digits(text: str) -> int:
    mant = text.split("e")[0].split("E")[0]
    digits = "".join(ch for ch in mant if ch.isdigit()).lstrip("0")
    return len(digits)
