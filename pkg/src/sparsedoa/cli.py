"""Command-line interface.

Every command is a thin client of the HTTP service: it assembles a
request, sends it (in-process by default, or to ``--server URL``), and
formats the response as CSV or JSON. Exit codes: 0 success, 2 parameter
error, 3 invariant violation.
"""

import json
import sys

import click

from .client import ServiceClient
from .errors import InvariantViolation, ParameterError

_DESIGN_PARAMS = {
    "secna": ("m", "n"),
    "nested": ("n1", "n2"),
    "ula": ("count",),
}


def _parse_array_spec(text: str) -> dict:
    """Parse ``design:p1,p2`` (e.g. ``secna:3,4`` or ``ula:8``)."""
    design, _, rest = text.partition(":")
    names = _DESIGN_PARAMS.get(design)
    if names is None:
        raise ParameterError(f"unknown design '{design}' (choose from {sorted(_DESIGN_PARAMS)})")
    values = [v for v in rest.split(",") if v != ""]
    if len(values) != len(names):
        raise ParameterError(
            f"design '{design}' takes {len(names)} parameter(s) {names}, got {len(values)}"
        )
    try:
        params = {k: int(v) for k, v in zip(names, values)}
    except ValueError as exc:
        raise ParameterError(f"array parameters must be integers: {exc}") from exc
    return {"design": design, "params": params}


def _params_from_args(design: str, values) -> dict:
    return _parse_array_spec(design + ":" + ",".join(str(v) for v in values))["params"]


def _parse_float_list(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ParameterError(f"expected a comma-separated number list: {exc}") from exc


def _parse_int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v != ""]
    except ValueError as exc:
        raise ParameterError(f"expected a comma-separated integer list: {exc}") from exc


def _load_scenario(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"scenario file is not valid JSON: {exc}") from exc


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _emit_json(obj, out_path):
    _emit(json.dumps(obj, indent=2) + "\n", out_path)


def _sweep_csv(report: dict) -> str:
    lines = ["sweep_value,array,rmse,failures"]
    for row in report["rows"]:
        value = "nan" if row["rmse"] is None else str(row["rmse"])
        lines.append(f"{row['sweep_value']},{row['array']},{value},{row['failures']}")
    return "\n".join(lines) + "\n"


class _ExitCodeGroup(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ParameterError as exc:
            click.echo(f"parameter error: {exc}", err=True)
            ctx.exit(2)
        except InvariantViolation as exc:
            click.echo(f"invariant violation: {exc}", err=True)
            ctx.exit(3)


@click.group(cls=_ExitCodeGroup)
@click.option("--server", default=None, help="Service URL; default runs the app in-process.")
@click.option("--seed", type=int, default=None, help="Master seed for seeded commands.")
@click.option("--trials", type=int, default=None, help="Monte Carlo trials per sweep point.")
@click.option("--grid-step", type=float, default=None, help="Spectrum grid step in degrees.")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write primary output to this file instead of stdout.")
@click.pass_context
def main(ctx, server, seed, trials, grid_step, out):
    """Sparse-array DOA estimation toolkit."""
    ctx.obj = {
        "server": server,
        "seed": 0 if seed is None else seed,
        "trials": 50 if trials is None else trials,
        "grid_step": 0.1 if grid_step is None else grid_step,
        "out": out,
    }


def _client(ctx) -> ServiceClient:
    return ServiceClient(base_url=ctx.obj["server"])


@main.command()
@click.argument("design")
@click.argument("params", nargs=-1, type=int)
@click.pass_context
def design(ctx, design, params):
    """Emit an array design as JSON: {design, params, positions}.

    Examples: ``design secna 3 4``, ``design nested 6 7``, ``design ula 8``.
    """
    with _client(ctx) as client:
        result = client.design(design, _params_from_args(design, params))
    _emit_json(result, ctx.obj["out"])


@main.command()
@click.argument("design")
@click.argument("params", nargs=-1, type=int)
@click.option("--kind", type=click.Choice(["sdca", "diff", "sum"]), default="sdca",
              help="Which co-array to analyze.")
@click.pass_context
def coarray(ctx, design, params, kind):
    """Emit the co-array weight function as CSV plus a summary line."""
    with _client(ctx) as client:
        result = client.coarray(
            array={"design": design, "params": _params_from_args(design, params)}, kind=kind
        )
    lines = ["lag,weight"]
    lines.extend(f"{e['lag']},{e['weight']}" for e in result["lags"])
    dof = result["dof"] if result["dof"] is not None else "nan"
    lines.append(
        f"# kind={result['kind']} dof={dof} vaa={result['vaa']}"
        f" segment=[{result['segment_lo']},{result['segment_hi']}]"
        f" virtual_half_length={result['virtual_half_length']}"
    )
    _emit("\n".join(lines) + "\n", ctx.obj["out"])


@main.command("dof-table")
@click.option("--budgets", default="9,13,19,23,27", show_default=True,
              help="Comma-separated odd sensor budgets.")
@click.pass_context
def dof_table_cmd(ctx, budgets):
    """Emit the DOF comparison table as JSON."""
    with _client(ctx) as client:
        result = client.dof_table(_parse_int_list(budgets))
    _emit_json(result, ctx.obj["out"])


@main.command()
@click.option("--array", "array_spec", required=True, help="Array spec, e.g. secna:3,4.")
@click.option("--scenario", "scenario_path", required=True,
              type=click.Path(exists=False), help="Scenario JSON file.")
@click.pass_context
def simulate(ctx, array_spec, scenario_path):
    """Generate snapshots as CSV: one row per sensor, re/im interleaved."""
    scenario = _load_scenario(scenario_path)
    with _client(ctx) as client:
        result = client.simulate(_parse_array_spec(array_spec), scenario)
    lines = [f"# sensors={result['sensors']} snapshots={result['snapshots']} layout=re,im interleaved"]
    lines.extend(",".join(str(v) for v in row) for row in result["data"])
    _emit("\n".join(lines) + "\n", ctx.obj["out"])


@main.command()
@click.option("--array", "array_spec", required=True, help="Array spec, e.g. secna:3,4.")
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=False),
              help="Scenario JSON file.")
@click.option("--q", "q", required=True, type=int, help="Number of sources to estimate.")
@click.pass_context
def estimate(ctx, array_spec, scenario_path, q):
    """Estimate DOAs: peaks JSON on stdout, spectrum CSV to --out if given."""
    scenario = _load_scenario(scenario_path)
    with _client(ctx) as client:
        result = client.estimate(
            _parse_array_spec(array_spec), scenario, q, ctx.obj["grid_step"]
        )
    if ctx.obj["out"]:
        lines = ["angle_deg,power"]
        lines.extend(f"{a},{p}" for a, p in result["spectrum"])
        _emit("\n".join(lines) + "\n", ctx.obj["out"])
    click.echo(json.dumps({"peaks": result["peaks"], "shortfall": result["shortfall"]}, indent=2))


def _sweep_common(ctx, arrays, q, span, payload_extra):
    payload = {
        "arrays": [_parse_array_spec(a) for a in arrays],
        "q": q,
        "angle_span": span,
        "trials": ctx.obj["trials"],
        "master_seed": ctx.obj["seed"],
        "grid_step_deg": ctx.obj["grid_step"],
    }
    payload.update(payload_extra)
    return payload


@main.command("sweep-snr")
@click.option("--arrays", "arrays", multiple=True, required=True,
              help="Array spec (repeatable), e.g. --arrays secna:3,4 --arrays nested:6,7.")
@click.option("--q", "q", default=31, show_default=True, type=int)
@click.option("--span", default=60.0, show_default=True, type=float,
              help="Sources span [-span, +span] degrees.")
@click.option("--snr", default="-5,0,5,10,15,20", show_default=True,
              help="Comma-separated SNR grid in dB.")
@click.option("--snapshots", default=2000, show_default=True, type=int,
              help="Snapshot count held fixed.")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the full JSON report here.")
@click.pass_context
def sweep_snr_cmd(ctx, arrays, q, span, snr, snapshots, report_path):
    """RMSE vs SNR sweep; emits CSV (sweep_value,array,rmse,failures)."""
    payload = _sweep_common(ctx, arrays, q, span,
                            {"snr_db": _parse_float_list(snr), "snapshots": snapshots})
    with _client(ctx) as client:
        report = client.sweep_snr(payload)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    _emit(_sweep_csv(report), ctx.obj["out"])


@main.command("sweep-snapshots")
@click.option("--arrays", "arrays", multiple=True, required=True,
              help="Array spec (repeatable), e.g. --arrays secna:3,4 --arrays nested:6,7.")
@click.option("--q", "q", default=31, show_default=True, type=int)
@click.option("--span", default=60.0, show_default=True, type=float,
              help="Sources span [-span, +span] degrees.")
@click.option("--snapshot-list", "snapshot_list", default="300,1000,2000,2600",
              show_default=True, help="Comma-separated snapshot counts.")
@click.option("--snr", default=20.0, show_default=True, type=float, help="SNR held fixed (dB).")
@click.option("--report", "report_path", type=click.Path(dir_okay=False), default=None,
              help="Also write the full JSON report here.")
@click.pass_context
def sweep_snapshots_cmd(ctx, arrays, q, span, snapshot_list, snr, report_path):
    """RMSE vs snapshot-count sweep; emits CSV (sweep_value,array,rmse,failures)."""
    payload = _sweep_common(ctx, arrays, q, span,
                            {"snapshots_list": _parse_int_list(snapshot_list), "snr_db": snr})
    with _client(ctx) as client:
        report = client.sweep_snapshots(payload)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
    _emit(_sweep_csv(report), ctx.obj["out"])


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service with uvicorn."""
    import uvicorn

    uvicorn.run("sparsedoa.service:app", host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
