"""Command-line interface.

Subcommands:
- ``speed``: evaluate the speed function at one decay rate
- ``critical``: critical decay rate and wave-speed
- ``sweep``: critical speeds of all three models along a parameter axis
- ``pde``: integrate the front system and write field and front trace
- ``bbm``: particle statistics (rightmost, CDF, martingale, Feynman-Kac)
- ``verify``: run catalog experiments

Model parameters come from ``--config`` (TOML) and are overridden by flags.
Usage errors exit with status 2, failed experiments with status 1.
"""

from __future__ import annotations

import contextlib
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence

import click
import numpy as np
import pandas as pd

from . import __version__
from .base.loggable import setup_logging
from .config.settings import RunConfig, Settings
from .core.errors import ConfigurationError, DomainError, SeedwaveError
from .core.model import ModelParams, Variant, load_params_file
from .harness.experiments import ALL_EXPERIMENTS, gaussian_bump
from .harness.manager import default_catalog
from .harness.report import write_table
from .particles.feynman_kac import onoff_bm_feynman_kac
from .particles.stats import empirical_rightmost_cdf, martingale_paths, rightmost_speed
from .pde.grid import Grid1D, exponential_ic, heaviside_ic
from .pde.solver import integrate
from .wavespeed.critical import SweepAxis, critical_speed, sweep_critical
from .wavespeed.speed import perron_eigenvector, speed_function


@dataclass
class CliState:
    """Values resolved by the group options and shared with subcommands."""

    settings: Settings
    file_values: Dict[str, Any] = field(default_factory=dict)
    output_dir: Optional[str] = None

    def pick(self, key: str, flag: Any, default: Any = None) -> Any:
        """Flag value, else the config-file value, else ``default``."""
        if flag is not None:
            return flag
        return self.file_values.get(key, default)


def _catalog_epilog() -> str:
    lines = ["Experiments (seedwave verify NAME):", ""]
    for experiment_cls in ALL_EXPERIMENTS:
        meta = experiment_cls.get_metadata()
        lines.append(f"  {meta.name}: {meta.anchor}")
    return "\b\n" + "\n".join(lines)


@contextlib.contextmanager
def _usage_errors() -> Iterator[None]:
    """Map invalid input to usage errors (exit 2) and library failures to exit 1."""
    try:
        yield
    except (DomainError, ConfigurationError) as e:
        raise click.UsageError(str(e)) from e
    except SeedwaveError as e:
        raise click.ClickException(str(e)) from e
    except ValueError as e:
        raise click.UsageError(str(e)) from e


def _float_list(value: str) -> List[float]:
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"Expected comma-separated numbers, got {value!r}") from None


def model_options(command: Callable) -> Callable:
    """Attach the shared model flags to a subcommand."""
    options = [
        click.option(
            "--variant",
            type=click.Choice([v.value for v in Variant] + ["I", "II"], case_sensitive=False),
            default=None,
            help="Model: classical, seedbank (I) or spore (II).",
        ),
        click.option("--c", "c", type=float, default=None, help="Active -> dormant rate."),
        click.option("--cprime", type=float, default=None, help="Dormant -> active rate."),
        click.option("--kappa", type=float, default=None, help="Branching rate."),
        click.option("--p", "offspring", default=None, help="Offspring law p_1,...,p_K."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _resolve_params(
    state: CliState,
    variant: Optional[str],
    c: Optional[float],
    cprime: Optional[float],
    kappa: Optional[float],
    offspring: Optional[str],
) -> ModelParams:
    mapping = {
        key: state.file_values[key]
        for key in ("variant", "c", "c_prime", "kappa", "offspring")
        if key in state.file_values
    }
    overrides = {"variant": variant, "c": c, "c_prime": cprime, "kappa": kappa}
    mapping.update({key: value for key, value in overrides.items() if value is not None})
    if offspring is not None:
        mapping["offspring"] = _float_list(offspring)
    try:
        return ModelParams.from_mapping(mapping)
    except ValueError as e:
        raise click.UsageError(f"Invalid model parameters: {e}") from e


def _run_config(state: CliState, subcommand: str, params: ModelParams, **fields: Any) -> RunConfig:
    return RunConfig(
        subcommand=subcommand,
        params=params,
        threads=state.settings.threads,
        output_dir=state.output_dir or state.settings.output_dir,
        **fields,
    )


def _emit(state: CliState, run: RunConfig, frame: pd.DataFrame, filename: Optional[str] = None) -> None:
    """Print ``frame`` as CSV or write it to ``output_dir/filename``."""
    header = run.header_lines(__version__)
    if filename is None:
        for line in header:
            click.echo(line)
        click.echo(
            frame.to_csv(index=False, float_format=state.settings.float_format, lineterminator="\n"),
            nl=False,
        )
        return
    path = write_table(frame, Path(run.output_dir) / filename, header, state.settings.float_format)
    click.echo(f"wrote {path}")


@click.group(epilog=_catalog_epilog())
@click.version_option(__version__, prog_name="seedwave")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="TOML parameter file.")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False), default=None)
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads (1 = bitwise reproducible).")
@click.option("--output-dir", type=click.Path(file_okay=False), default=None, help="Directory for CSV outputs.")
@click.pass_context
def cli(ctx: click.Context, config_path, log_level, threads, output_dir) -> None:
    """Travelling fronts of the F-KPP equation with dormancy."""
    overrides = {"threads": threads, "output_dir": output_dir, "log_level": log_level}
    try:
        settings = Settings(**{key: value for key, value in overrides.items() if value is not None})
    except ValueError as e:
        raise click.UsageError(str(e)) from e
    setup_logging(settings.log_level)
    file_values: Dict[str, Any] = {}
    if config_path is not None:
        try:
            file_values = load_params_file(config_path)
        except Exception as e:
            raise click.UsageError(f"Cannot read {config_path}: {e}") from e
    ctx.obj = CliState(settings=settings, file_values=file_values, output_dir=output_dir)


@cli.command()
@model_options
@click.option("--mu", type=float, required=True, help="Decay rate (< 0).")
@click.pass_obj
def speed(state: CliState, variant, c, cprime, kappa, offspring, mu) -> None:
    """Evaluate both speed branches at MU."""
    params = _resolve_params(state, variant, c, cprime, kappa, offspring)
    with _usage_errors():
        ev = speed_function(mu, params)
    frame = pd.DataFrame(
        [{"mu": ev.mu, "lambda_plus": ev.lambda_plus, "lambda_minus": ev.lambda_minus, "discriminant": ev.discriminant}]
    )
    _emit(state, _run_config(state, "speed", params, extra={"mu": mu}), frame)


@cli.command()
@model_options
@click.pass_obj
def critical(state: CliState, variant, c, cprime, kappa, offspring) -> None:
    """Critical decay rate mu* and wave-speed lambda*."""
    params = _resolve_params(state, variant, c, cprime, kappa, offspring)
    with _usage_errors():
        crit = critical_speed(params)
    frame = pd.DataFrame(
        [
            {
                "variant": crit.variant.value,
                "mu_star": crit.mu_star,
                "lambda_star": crit.lambda_star,
                "det_residual": crit.det_residual,
                "d1": crit.eigvec[0],
                "d2": crit.eigvec[1],
            }
        ]
    )
    _emit(state, _run_config(state, "critical", params), frame)


@cli.command()
@model_options
@click.option("--axis", type=click.Choice([a.value for a in SweepAxis]), required=True)
@click.option("--values", "values", required=True, help="Comma-separated axis values.")
@click.pass_obj
def sweep(state: CliState, variant, c, cprime, kappa, offspring, axis, values) -> None:
    """Critical speeds of all three models along AXIS."""
    params = _resolve_params(state, variant, c, cprime, kappa, offspring)
    grid = _float_list(values)
    with _usage_errors():
        frame = sweep_critical(params, axis, grid, threads=state.settings.threads)
    run = _run_config(state, "sweep", params, extra={"axis": axis})
    _emit(state, run, frame.drop(columns=["error"]), f"sweep_{axis}.csv")
    if (frame["error"] != "").any():
        raise click.ClickException("Some sweep rows failed; see the log")


def _parse_ic(spec: str, grid: Grid1D, params: ModelParams):
    if spec == "heaviside":
        return heaviside_ic(grid)
    parts = spec.split(":")
    if parts[0] != "exponential" or len(parts) not in (2, 4):
        raise click.BadParameter(
            f"Expected 'heaviside' or 'exponential:mu[:d1:d2]', got {spec!r}", param_hint="--ic"
        )
    mu = float(parts[1])
    d = (float(parts[2]), float(parts[3])) if len(parts) == 4 else perron_eigenvector(mu, params)
    return exponential_ic(grid, mu, d)


@cli.command()
@model_options
@click.option("--xmin", type=float, default=None)
@click.option("--xmax", type=float, default=None)
@click.option("--dx", type=float, default=None)
@click.option("--T", "T", type=float, default=None, help="Time horizon.")
@click.option("--dt", type=float, default=None, help="Time step (default 0.4 dx^2).")
@click.option("--ic", "ic_spec", default=None, help="heaviside or exponential:mu[:d1:d2].")
@click.option("--sample-every", type=float, default=None, help="Front sampling interval.")
@click.pass_obj
def pde(state: CliState, variant, c, cprime, kappa, offspring, xmin, xmax, dx, T, dt, ic_spec, sample_every) -> None:
    """Integrate the front system; writes pde_field.csv and pde_front.csv."""
    params = _resolve_params(state, variant, c, cprime, kappa, offspring)
    xmin = float(state.pick("xmin", xmin, -60.0))
    xmax = float(state.pick("xmax", xmax, 140.0))
    dx = float(state.pick("dx", dx, state.settings.pde_dx))
    T = float(state.pick("T", T, 40.0))
    ic_spec = state.pick("ic", ic_spec, "heaviside")
    sample_every = float(state.pick("sample_every", sample_every, 0.5))
    with _usage_errors():
        grid = Grid1D.from_bounds(xmin, xmax, dx)
        ic = _parse_ic(ic_spec, grid, params)
        run = integrate(params, ic, T, dt=dt, record_every=sample_every, cfl=state.settings.pde_cfl)
    config = _run_config(
        state, "pde", params, grid=(xmin, xmax, dx), T=T, dt=run.dt, extra={"ic": ic_spec}
    )
    _emit(state, config, pd.DataFrame({"x": grid.x, "u": run.field.u, "v": run.field.v}), "pde_field.csv")
    times, positions = run.trace.as_arrays()
    _emit(state, config, pd.DataFrame({"t": times, "front_x": positions}), "pde_front.csv")


def _split_emit(emit: str, arity: int) -> List[str]:
    parts = emit.split(":")
    if len(parts) != arity:
        raise click.BadParameter(f"Malformed --emit value {emit!r}", param_hint="--emit")
    return parts


@cli.command()
@model_options
@click.option("--T", "T", type=float, default=None, help="Horizon for --emit rightmost.")
@click.option("--replicates", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=click.IntRange(min=0), default=None)
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Population cap.")
@click.option(
    "--emit",
    default="rightmost",
    show_default=True,
    help="rightmost | cdf:t:x1,x2 | martingale:mu:t1,t2 | fk:mu:t:x1,x2",
)
@click.pass_obj
def bbm(state: CliState, variant, c, cprime, kappa, offspring, T, replicates, seed, cap, emit) -> None:
    """On/off branching Brownian motion statistics."""
    params = _resolve_params(state, variant, c, cprime, kappa, offspring)
    T = float(state.pick("T", T, 15.0))
    replicates = int(state.pick("replicates", replicates, 200))
    seed = int(state.pick("seed", seed, state.settings.default_seed))
    cap = int(state.pick("cap", cap, state.settings.particle_cap))
    threads = state.settings.threads
    kind = emit.split(":", 1)[0]
    fields: Dict[str, Any] = {"replicates": replicates, "seed": seed, "cap": cap, "extra": {"emit": emit}}

    with _usage_errors():
        if kind == "rightmost":
            stat = rightmost_speed(params, T, replicates, seed=seed, cap=cap, threads=threads)
            frame = pd.DataFrame({"replicate": np.arange(stat.samples.size), "R_T": stat.samples})
            fields["T"] = T
            filename = "bbm_rightmost.csv"
        elif kind == "cdf":
            _, t, xs = _split_emit(emit, 3)
            est = empirical_rightmost_cdf(
                params, float(t), replicates, _float_list(xs), seed=seed, cap=cap, threads=threads
            )
            frame = pd.DataFrame({"x": est.xs, "p_hat": est.p_hat, "stderr": est.stderr})
            fields["T"] = float(t)
            filename = "bbm_cdf.csv"
        elif kind == "martingale":
            _, mu, ts = _split_emit(emit, 3)
            times = sorted(_float_list(ts))
            paths = martingale_paths(params, float(mu), times, replicates, seed=seed, cap=cap, threads=threads)
            frame = pd.DataFrame(paths, columns=[f"X_{t:g}" for t in times])
            frame.insert(0, "replicate", np.arange(paths.shape[0]))
            filename = "bbm_martingale.csv"
        elif kind == "fk":
            _, mu, t, xs = _split_emit(emit, 4)
            lam = speed_function(float(mu), params).lambda_plus
            probes = np.asarray(_float_list(xs))
            estimate, stderr = onoff_bm_feynman_kac(
                params, lam, float(t), probes, gaussian_bump(2.0, 1.0), gaussian_bump(2.0, 0.5),
                replicates, seed=seed,
            )
            frame = pd.DataFrame({"x": probes, "estimate": estimate, "stderr": stderr})
            fields["T"] = float(t)
            filename = "bbm_fk.csv"
        else:
            raise click.BadParameter(f"Unknown --emit kind {kind!r}", param_hint="--emit")
    _emit(state, _run_config(state, "bbm", params, **fields), frame, filename)


@cli.command()
@click.argument("names", nargs=-1)
@click.option("--all", "run_all", is_flag=True, help="Run every experiment.")
@click.option("--list", "list_only", is_flag=True, help="List experiments and exit.")
@click.option("--quick", is_flag=True, help="Reduced budgets, tolerances relaxed.")
@click.pass_context
def verify(ctx: click.Context, names: Sequence[str], run_all: bool, list_only: bool, quick: bool) -> None:
    """Run catalog experiments by NAME (or --all)."""
    state: CliState = ctx.obj
    catalog = default_catalog(state.settings)
    if list_only:
        for line in catalog.describe():
            click.echo(line)
        return
    if run_all:
        names = catalog.names()
    if not names:
        raise click.UsageError("Give experiment names, --all or --list")
    for name in names:
        if name not in catalog.experiments:
            raise click.BadParameter(f"Unknown experiment {name!r}", param_hint="NAMES")

    output_dir = state.output_dir or state.settings.output_dir
    with _usage_errors():
        reports = catalog.run_many(names, quick=quick, output_dir=output_dir, threads=state.settings.threads)
    failed = []
    for report in reports:
        click.echo(report.render())
        if not report.passed:
            failed.append(report.name)
    if failed:
        click.echo(f"FAILED: {', '.join(failed)}", err=True)
        ctx.exit(1)


def parse_and_dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI on ``argv`` and return the process exit code."""
    try:
        result = cli.main(args=list(argv) if argv is not None else None, prog_name="seedwave", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(parse_and_dispatch())
