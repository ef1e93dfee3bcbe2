"""Command-line surface: tabulate -> alphas -> gamma -> verify, plus ak.

The CLI is a thin client over the same request/response models the HTTP
service uses.  By default requests execute in-process; pass ``--server``
(or set STIELTJES_SERVER) to route them to a running service instead.

Data goes to files, progress and diagnostics to stderr, and stdout
carries only machine-readable results, so pipelines can script against
it.  Exit codes: 0 ok, 2 usage, 3 corruption detected, 4 capacity
exceeded, 5 I/O or format problems.
"""

from __future__ import annotations

import json
import os
import sys
import time
from fractions import Fraction

import click

from . import __version__
from .errors import EXIT_IO, EXIT_USAGE, StieltjesError
from .service import handlers, schemas

WORKERS_ENV = "STIELTJES_WORKERS"
SERVER_ENV = "STIELTJES_SERVER"


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


class Backend:
    """Dispatch point shared by all commands."""

    def tabulate(self, req: schemas.TabulateRequest) -> str:
        raise NotImplementedError

    def call(self, name: str, req):
        raise NotImplementedError


class LocalBackend(Backend):
    def tabulate(self, req: schemas.TabulateRequest) -> str:
        t0 = time.monotonic()
        last = [0.0]

        def progress(done: int, total: int) -> None:
            now = time.monotonic()
            if now - last[0] >= 0.5 or done >= total:
                rate = done / max(now - t0, 1e-9)
                click.echo(
                    f"tabulate: {done}/{total} nodes ({rate:.1f} nodes/s)", err=True
                )
                last[0] = now

        return handlers.run_tabulate(req, progress=progress)

    def call(self, name: str, req):
        return getattr(handlers, name)(req)


class HttpBackend(Backend):
    _routes = {
        "handle_zeta": "/zeta",
        "handle_f_reg": "/f-reg",
        "handle_scan": "/tables/scan",
        "handle_alphas": "/alphas",
        "handle_gamma": "/gamma",
        "handle_ak": "/ak",
        "handle_identities": "/verify/identities",
        "handle_cross_zeta": "/verify/cross-zeta",
    }
    _responses = {
        "handle_zeta": schemas.ValueResponse,
        "handle_f_reg": schemas.ValueResponse,
        "handle_scan": schemas.ScanResponse,
        "handle_alphas": schemas.AlphasResponse,
        "handle_gamma": schemas.GammaResponse,
        "handle_ak": schemas.AkResponse,
        "handle_identities": schemas.IdentitiesResponse,
        "handle_cross_zeta": schemas.CrossZetaResponse,
    }

    def __init__(self, base_url: str):
        import httpx

        self._client = httpx.Client(base_url=base_url, timeout=None)

    def _raise_for_error(self, resp) -> None:
        if resp.status_code < 400:
            return
        try:
            payload = resp.json()
        except ValueError:
            payload = {"error": resp.text, "class": "StieltjesError"}
        exc_class = payload.get("class", "StieltjesError")
        from . import errors

        cls = getattr(errors, exc_class, StieltjesError)
        if cls is errors.CorruptionError:
            raise cls(payload.get("error", "corruption detected"), payload.get("flagged", {}))
        raise cls(payload.get("error", f"server error {resp.status_code}"))

    def tabulate(self, req: schemas.TabulateRequest) -> str:
        resp = self._client.post("/tables/tabulate", json=req.model_dump())
        self._raise_for_error(resp)
        job_id = schemas.JobAccepted.model_validate(resp.json()).job_id
        while True:
            status_resp = self._client.get(f"/jobs/{job_id}")
            self._raise_for_error(status_resp)
            status = schemas.JobStatus.model_validate(status_resp.json())
            click.echo(
                f"tabulate[{job_id}]: {status.state} {status.done_nodes}/{status.total_nodes}",
                err=True,
            )
            if status.state == "done":
                return status.out_path or req.out_path
            if status.state == "failed":
                from . import errors

                cls = getattr(errors, status.error_class or "", StieltjesError)
                if cls is errors.CorruptionError:
                    raise cls(status.error or "job failed", {})
                raise cls(status.error or "job failed")
            time.sleep(0.5)

    def call(self, name: str, req):
        resp = self._client.post(self._routes[name], json=req.model_dump())
        self._raise_for_error(resp)
        return self._responses[name].model_validate(resp.json())


def _backend(ctx: click.Context) -> Backend:
    server = ctx.obj.get("server")
    if server:
        return HttpBackend(server)
    return LocalBackend()


def _emit(model) -> None:
    click.echo(json.dumps(model.model_dump(), indent=2, sort_keys=True))


@click.group()
@click.version_option(version=__version__, prog_name="stieltjes")
@click.option(
    "--server",
    envvar=SERVER_ENV,
    default=None,
    help="Base URL of a running stieltjes service; default is in-process execution.",
)
@click.pass_context
def main(ctx: click.Context, server: str | None) -> None:
    """High-precision Stieltjes constants pipeline."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


def _eps_options(eps_log2: int | None, eps: str | None) -> dict:
    if eps is not None:
        return {"eps_log2": None, "eps": eps}
    return {"eps_log2": eps_log2 if eps_log2 is not None else 6, "eps": None}


@main.command()
@click.option("--eps-log2", type=int, default=None, help="Grid step eps = 2^-eps_log2 (default 6).")
@click.option("--eps", "eps_frac", default=None, help="Escape hatch: arbitrary rational eps as p/q.")
@click.option("--digits", type=int, required=True, help="Stored precision per node.")
@click.option("--nodes", type=int, required=True, help="Number of grid nodes.")
@click.option("--workers", type=int, default=None, help=f"Worker processes (default ${WORKERS_ENV} or 1).")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output table file.")
@click.option("--resume", is_flag=True, help="Keep/reuse shard checkpoints next to the output file.")
@click.option("--shard-size", type=int, default=256, show_default=True)
@click.pass_context
def tabulate(ctx, eps_log2, eps_frac, digits, nodes, workers, out_path, resume, shard_size):
    """Tabulate the regularized zeta on the grid 1 + j*eps (step 1)."""
    try:
        config = schemas.RunConfig(
            digits=digits,
            node_count=nodes,
            workers=workers if workers is not None else _default_workers(),
            **_eps_options(eps_log2, eps_frac),
        )
        req = schemas.TabulateRequest(
            config=config, out_path=out_path, resume=resume, shard_size=shard_size
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    path = _backend(ctx).tabulate(req)
    click.echo(json.dumps({"table": path}))


@main.command()
@click.argument("table_path", type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output alpha file.")
@click.option("--skip-scan", is_flag=True, help="Skip the corruption scan (not recommended).")
@click.pass_context
def alphas(ctx, table_path, out_path, skip_scan):
    """Alternating binomial differences alpha_k with cutoff k0 (step 2)."""
    req = schemas.AlphasRequest(table_path=table_path, out_path=out_path, skip_scan=skip_scan)
    _emit(_backend(ctx).call("handle_alphas", req))


@main.command()
@click.argument("alpha_path", type=click.Path())
@click.option("--n", "index", type=int, default=None, help="Single index n.")
@click.option("--all", "do_all", is_flag=True, help="All certifiable n = 0..k0.")
@click.option("--out", "out_path", type=click.Path(), default=None, help="Output gamma file.")
@click.pass_context
def gamma(ctx, alpha_path, index, do_all, out_path):
    """Stieltjes constants from an alpha series (step 3)."""
    if (index is None) == (not do_all):
        raise click.UsageError("specify exactly one of --n or --all")
    req = schemas.GammaRequest(alpha_path=alpha_path, n=index, out_path=out_path)
    _emit(_backend(ctx).call("handle_gamma", req))


@main.command()
@click.option("--kmax", type=int, required=True, help="Largest k in the emitted series.")
@click.option("--digits", type=int, default=50, show_default=True)
@click.option("--out", "out_csv", type=click.Path(), default=None, help="CSV output path.")
@click.pass_context
def ak(ctx, kmax, digits, out_csv):
    """Exact A_k series and the saddle-point asymptotic, as CSV."""
    req = schemas.AkRequest(k_max=kmax, digits=digits, out_csv=out_csv)
    _emit(_backend(ctx).call("handle_ak", req))


@main.command()
@click.option("--identities", is_flag=True, help="A_k identity residual report.")
@click.option("--kmax", type=int, default=2000, show_default=True)
@click.option("--nmax", type=int, default=3, show_default=True)
@click.option("--digits", type=int, default=50, show_default=True)
@click.option("--table", "table_path", type=click.Path(), default=None, help="Corruption scan target.")
@click.option(
    "--orders",
    default=None,
    help="Comma-separated difference orders for --table (default: auto spread).",
)
@click.option("--cross-zeta", "cross", default=None, help="Comma-separated s values to cross-check.")
@click.pass_context
def verify(ctx, identities, kmax, nmax, digits, table_path, orders, cross):
    """Validation suite: identities, corruption scan, cross-method zeta."""
    backend = _backend(ctx)
    ran = False
    if identities:
        ran = True
        req = schemas.IdentitiesRequest(k_limit=kmax, n_max=nmax, digits=digits)
        _emit(backend.call("handle_identities", req))
    if table_path is not None:
        ran = True
        order_list = None
        if orders:
            try:
                order_list = [int(x) for x in orders.split(",") if x.strip()]
            except ValueError as exc:
                raise click.UsageError(f"bad --orders: {exc}") from exc
        req = schemas.ScanRequest(table_path=table_path, orders=order_list)
        resp = backend.call("handle_scan", req)
        _emit(resp)
        if not resp.clean:
            sys.exit(3)
    if cross is not None:
        ran = True
        req = schemas.CrossZetaRequest(s_values=[s.strip() for s in cross.split(",")], digits=digits)
        resp = backend.call("handle_cross_zeta", req)
        _emit(resp)
        if not resp.passed:
            sys.exit(1)
    if not ran:
        raise click.UsageError("nothing to verify: pass --identities, --table, or --cross-zeta")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8714, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port, log_level="info")


def entrypoint(argv: list[str] | None = None) -> int:
    """Process entry with the documented exit-code mapping."""
    try:
        main.main(args=argv, standalone_mode=False, obj={})
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.exceptions.Abort:
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code or 0)
    except StieltjesError as exc:
        payload = {"error": str(exc), "class": type(exc).__name__}
        if hasattr(exc, "flagged"):
            payload["flagged"] = exc.flagged
        click.echo(json.dumps(payload), err=True)
        return exc.exit_code
    except (OSError, IOError) as exc:
        click.echo(f"i/o error: {exc}", err=True)
        return EXIT_IO


if __name__ == "__main__":  # pragma: no cover
    sys.exit(entrypoint())
