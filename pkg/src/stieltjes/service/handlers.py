"""Request-model handlers shared by the FastAPI routes and the local CLI.

Each handler takes a validated request model and returns a response
model; package exceptions bubble up for the transport layer (HTTP app or
CLI main) to map onto status codes or exit codes.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import mpmath

from .. import __version__
from ..ak import ak_series, verify_identities, write_ak_csv
from ..core import compute_alphas, gamma_all, gamma_n, load_alphas, save_alphas, save_gammas
from ..corruption import scan_orders
from ..errors import CapacityError, FormatError
from ..nodes import load_table, save_table, tabulate
from ..oracles import zeta_cross_check
from ..precision import working_digits
from ..stirling import stirling_signed
from ..zeta import f_reg, zeta_em, zeta_eta
from . import schemas


def parse_point(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad numeric literal {text!r}: {exc}") from exc


def config_eps(config: schemas.RunConfig) -> Fraction:
    if config.eps_log2 is not None:
        return Fraction(1, 2**config.eps_log2)
    return parse_point(config.eps)


def _value_response(result) -> schemas.ValueResponse:
    digits = max(result.usable_digits, 1)
    return schemas.ValueResponse(
        value=result.to_str(min(digits, 100_000)),
        abs_err=mpmath.nstr(result.abs_err, 3),
        usable_digits=result.usable_digits,
    )


def handle_zeta(req: schemas.ZetaRequest) -> schemas.ValueResponse:
    s = parse_point(req.s)
    fn = zeta_em if req.method == "em" else zeta_eta
    return _value_response(fn(s, req.digits))


def handle_f_reg(req: schemas.FRegRequest) -> schemas.ValueResponse:
    return _value_response(f_reg(parse_point(req.s), req.digits))


def run_tabulate(req: schemas.TabulateRequest, progress=None) -> str:
    """Synchronous tabulation; the service wraps this in a job thread."""
    eps = config_eps(req.config)
    checkpoint = Path(req.out_path + ".parts") if req.resume else None
    table = tabulate(
        eps,
        req.config.node_count,
        req.config.digits,
        workers=req.config.workers,
        checkpoint_dir=checkpoint,
        shard_size=req.shard_size,
        progress=progress,
    )
    save_table(table, req.out_path)
    if checkpoint is not None:
        for shard in sorted(checkpoint.glob("shard_*.tsv")):
            shard.unlink()
        try:
            checkpoint.rmdir()
        except OSError:
            pass
    return req.out_path


def handle_scan(req: schemas.ScanRequest) -> schemas.ScanResponse:
    table = load_table(req.table_path)
    result = scan_orders(table, req.orders, factor=req.factor)
    return schemas.ScanResponse(clean=result.is_clean, flagged=result.flagged)


def handle_alphas(req: schemas.AlphasRequest) -> schemas.AlphasResponse:
    table = load_table(req.table_path)
    series = compute_alphas(table, corruption_check=not req.skip_scan)
    save_alphas(series, req.out_path)
    return schemas.AlphasResponse(
        out_path=req.out_path,
        k0=series.k0,
        count=len(series.alphas),
        eps=f"{series.eps.numerator}/{series.eps.denominator}",
        source_digits=series.source_digits,
        exhausted=series.exhausted,
    )


def handle_gamma(req: schemas.GammaRequest) -> schemas.GammaResponse:
    series = load_alphas(req.alpha_path)
    triangle = stirling_signed(series.k0 + 1)
    if req.n is not None:
        results = [gamma_n(series, triangle, req.n)]
    else:
        results = gamma_all(series, triangle)
        if not results:
            raise CapacityError("no gamma_n is certifiable from this alpha series")
    if req.out_path:
        save_gammas(
            results,
            req.out_path,
            tool_version=__version__,
            source_digits=series.source_digits,
        )
    entries = [
        schemas.GammaEntry(
            n=r.n,
            value=r.value.to_str(r.guaranteed_digits),
            guaranteed_digits=r.guaranteed_digits,
        )
        for r in results
    ]
    return schemas.GammaResponse(
        eps=f"{series.eps.numerator}/{series.eps.denominator}",
        k0=series.k0,
        results=entries,
        out_path=req.out_path,
    )


def handle_ak(req: schemas.AkRequest) -> schemas.AkResponse:
    if req.out_csv:
        rows = write_ak_csv(req.out_csv, req.k_max, req.digits)
        first = []
    else:
        series = ak_series(req.k_max, req.digits)
        rows = len(series)
        first = [mpmath.nstr(a.value, min(req.digits, 25)) for a in series[:8]]
    return schemas.AkResponse(rows=rows, out_csv=req.out_csv, first_values=first)


def handle_identities(req: schemas.IdentitiesRequest) -> schemas.IdentitiesResponse:
    report = verify_identities(req.k_limit, req.n_max, req.digits)
    with working_digits(20):
        power = {n: mpmath.nstr(r, 6) for n, r in report.power_residuals.items()}
        harmonic = mpmath.nstr(report.harmonic_residual, 6)
    return schemas.IdentitiesResponse(
        k_used=report.k_used, power_residuals=power, harmonic_residual=harmonic
    )


def handle_cross_zeta(req: schemas.CrossZetaRequest) -> schemas.CrossZetaResponse:
    points = [parse_point(s) for s in req.s_values]
    report = zeta_cross_check(points, req.digits)
    return schemas.CrossZetaResponse(
        target_digits=report.target_digits,
        worst_agreement=report.worst_agreement,
        passed=report.passed,
        entries=[
            schemas.CrossZetaEntry(s=str(e.s), agreement_digits=e.agreement_digits)
            for e in report.entries
        ],
    )


def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)
