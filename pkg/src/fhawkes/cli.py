"""Command-line interface.

Subcommands: ``lambda``, ``expected-n``, ``simulate``, ``dist``,
``validate``.  Model flags can also come from a JSON config file
(``--config``); explicit flags override file values.

Exit codes: 0 success, 1 usage error, 2 numerical failure,
3 validation criteria failed.
"""

from __future__ import annotations

import json
import pathlib
import sys

import click
import numpy as np

from .analytics import ModelParams, expected_n, lambda_exact, lambda_image
from .errors import FHawkesError
from .harness import ExperimentConfig, run_distribution, run_expected_n
from .io import write_curves_csv, write_events_csv, write_report_json
from .laplace import ilt_grid
from .simulate import simulate_cluster, simulate_thinning
from .validation import run_validation

_MODEL_FLAGS = ("lambda0", "alpha", "beta", "gamma")


def _model_options(fn):
    for flag in reversed(_MODEL_FLAGS):
        fn = click.option(f"--{flag}", type=float, default=None)(fn)
    fn = click.option(
        "--config",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="JSON file mirroring the flags; explicit flags override it.",
    )(fn)
    return fn


def _resolve_params(config, **flags) -> ModelParams:
    values = {}
    if config:
        values.update(json.loads(pathlib.Path(config).read_text()))
    for key in _MODEL_FLAGS:
        if flags.get(key) is not None:
            values[key] = flags[key]
    missing = [k for k in _MODEL_FLAGS if k not in values]
    if missing:
        raise click.UsageError(f"missing model parameters: {', '.join(missing)}")
    return ModelParams(**{k: float(values[k]) for k in _MODEL_FLAGS})


def _config_value(config, key, default):
    if config:
        data = json.loads(pathlib.Path(config).read_text())
        if key in data:
            return data[key]
    return default


@click.group(name="fhawkes")
def cli():
    """Self-exciting point process with Mittag-Leffler kernel."""


@cli.command(name="lambda")
@_model_options
@click.option("--t-max", type=float, default=50.0, show_default=True)
@click.option("--grid", type=int, default=500, show_default=True)
@click.option(
    "--method",
    type=click.Choice(["exact", "ilt", "both"]),
    default="exact",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def lambda_cmd(config, lambda0, alpha, beta, gamma, t_max, grid, method, out):
    """Expected intensity curve on a uniform grid."""
    p = _resolve_params(config, lambda0=lambda0, alpha=alpha, beta=beta, gamma=gamma)
    t = np.linspace(0.0, t_max, grid + 1)[1:]
    table = {"t": t}
    if method in ("exact", "both"):
        table["exact"] = lambda_exact(t, p)
    if method in ("ilt", "both"):
        table["ilt"], _ = ilt_grid(lambda_image(p), t)
    write_curves_csv(out, table)
    click.echo(f"wrote {t.size} rows to {out}")


@cli.command(name="expected-n")
@_model_options
@click.option("--t-max", type=float, default=10.0, show_default=True)
@click.option("--grid", type=int, default=10, show_default=True)
@click.option(
    "--method",
    type=click.Choice(["exact", "ilt", "mc", "all"]),
    default="exact",
    show_default=True,
)
@click.option("--replicas", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def expected_n_cmd(
    config, lambda0, alpha, beta, gamma, t_max, grid, method, replicas, seed, out
):
    """Expected event count: closed form, inversion quadrature, Monte Carlo."""
    p = _resolve_params(config, lambda0=lambda0, alpha=alpha, beta=beta, gamma=gamma)
    times = np.linspace(0.0, t_max, grid + 1)[1:]
    if method in ("mc", "all"):
        comparisons = ("ilt",) if method == "all" else ()
        cfg = ExperimentConfig(
            params=p,
            times=tuple(times),
            replicas=replicas,
            seed=seed,
            comparisons=comparisons,
            output_path=out,
        )
        res = run_expected_n(cfg)
        click.echo(
            f"wrote {times.size} rows to {out} "
            f"(max |mc-exact|/se = {np.max(np.abs(res['mc_mean']-res['exact'])/res['mc_se']):.2f})"
        )
        return
    table = {"t": times, "exact": expected_n(times, p)}
    if method == "ilt":
        from .harness import expected_n_ilt_curve

        table["ilt"] = expected_n_ilt_curve(p, times)
    write_curves_csv(out, table)
    click.echo(f"wrote {times.size} rows to {out}")


@cli.command(name="simulate")
@_model_options
@click.option("--horizon", type=float, default=10.0, show_default=True)
@click.option("--replicas", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--engine",
    type=click.Choice(["thinning", "cluster"]),
    default="thinning",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def simulate_cmd(
    config, lambda0, alpha, beta, gamma, horizon, replicas, seed, engine, out
):
    """Draw sample paths and write (replica, k, T_k) rows."""
    p = _resolve_params(config, lambda0=lambda0, alpha=alpha, beta=beta, gamma=gamma)
    sim = simulate_thinning if engine == "thinning" else simulate_cluster
    seqs = [sim(p, horizon, seed, replica=r) for r in range(replicas)]
    write_events_csv(out, seqs)
    total = sum(len(s) for s in seqs)
    click.echo(f"wrote {total} events over {replicas} replicas to {out}")


@cli.command(name="dist")
@_model_options
@click.option("--t", "times", type=str, required=True,
              help="Comma-separated observation times.")
@click.option("--replicas", type=int, default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--compare",
    type=click.Choice(["poisson", "exp-hawkes", "none"]),
    default="none",
    show_default=True,
)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def dist_cmd(config, lambda0, alpha, beta, gamma, times, replicas, seed, compare, out):
    """Empirical distribution of the event count at fixed times."""
    p = _resolve_params(config, lambda0=lambda0, alpha=alpha, beta=beta, gamma=gamma)
    try:
        ts = tuple(sorted(float(x) for x in times.split(",")))
    except ValueError as exc:
        raise click.UsageError(f"cannot parse --t {times!r}") from exc
    comparisons = () if compare == "none" else (compare,)
    cfg = ExperimentConfig(
        params=p,
        times=ts,
        replicas=replicas,
        seed=seed,
        comparisons=comparisons,
        output_path=out,
    )
    dists = run_distribution(cfg)
    for d in dists:
        line = f"t={d.t:g}: support 0..{max(d.counts)}"
        if d.reference is not None:
            line += f", TV vs {d.reference[0]} = {d.tv_distance():.4f}"
        click.echo(line)
    click.echo(f"wrote distribution table to {out}")


@cli.command(name="validate")
@click.option("--smoke", is_flag=True, help="Reduced replica counts.")
@click.option("--seed", type=int, default=20240801, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def validate_cmd(smoke, seed, out):
    """Run the acceptance suite; exit 3 if any criterion fails."""
    report = run_validation(smoke=smoke, seed=seed)
    for rec in report["criteria"]:
        status = "PASS" if rec["passed"] else "FAIL"
        click.echo(
            f"[{status}] {rec['name']}: measured {rec['measured']:.4g} "
            f"vs bound {rec['bound']:.4g} ({rec['seconds']:.1f}s)"
        )
    if out:
        write_report_json(out, report)
        click.echo(f"report written to {out}")
    if not report["all_passed"]:
        sys.exit(3)


def main():
    try:
        cli(standalone_mode=False)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except FHawkesError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
