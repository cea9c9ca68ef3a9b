"""Command-line interface: run scenarios, play adversary duels, sweep
parameter grids, and verify certificates. Exit code is nonzero whenever a
requested certificate or bound check fails."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .harness import (
    ScenarioConfig,
    ScenarioError,
    duel_config,
    emit_report,
    load_scenario,
    run_experiment,
    sweep,
)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _finish(report, out, fmt) -> None:
    _write(emit_report(report, fmt), out)
    if not report.certificate_ok:
        sys.exit(1)


format_option = click.option(
    "--format", "fmt", type=click.Choice(["csv", "text"]), default="text", show_default=True
)
out_option = click.option("--out", type=click.Path(dir_okay=False), default=None)


@click.group()
def main() -> None:
    """Online call admission control: simulation, duels, and proof-ledger checks."""


@main.command()
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
@out_option
@format_option
def run(scenario: str, out: str | None, fmt: str) -> None:
    """Execute one scenario file."""
    try:
        config = load_scenario(scenario)
    except ScenarioError as exc:
        raise click.ClickException(str(exc))
    _finish(run_experiment(config), out, fmt)


@main.command()
@click.option("--adversary", required=True, help='"fig2", "fig3", or "random:<seed>:<length>"')
@click.option("--alg", required=True, help='"greedy", "caco", "caco2", or "partition:<x>:<y>"')
@click.option("--omega", required=True, type=int)
@click.option("--seed", type=int, default=None, help='shorthand: turns "random" into "random:<seed>:<omega>"')
@out_option
@format_option
def duel(adversary: str, alg: str, omega: int, seed: int | None, out: str | None, fmt: str) -> None:
    """Play an adversary against an online algorithm and report the exact ratio."""
    if adversary == "random" and seed is not None:
        adversary = f"random:{seed}:{omega}"
    try:
        config = duel_config(adversary, alg, omega)
    except ScenarioError as exc:
        raise click.ClickException(str(exc))
    _finish(run_experiment(config), out, fmt)


@main.command(name="sweep")
@click.argument("template", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--grid",
    "grid_specs",
    multiple=True,
    required=True,
    help='repeatable, e.g. --grid "algorithm=partition:1:1|partition:2:1" --grid "omega=21|42"',
)
@out_option
@format_option
def sweep_cmd(template: str, grid_specs: tuple, out: str | None, fmt: str) -> None:
    """Run a scenario template over a parameter grid and summarize ratios."""
    try:
        base = load_scenario(template)
    except ScenarioError as exc:
        raise click.ClickException(str(exc))
    grid: dict = {}
    for spec in grid_specs:
        if "=" not in spec:
            raise click.ClickException(f"bad grid spec {spec!r}; expected name=v1|v2")
        name, _, raw = spec.partition("=")
        if name not in ("algorithm", "omega", "traffic"):
            raise click.ClickException(f"cannot sweep field {name!r}")
        values = raw.split("|") if name != "omega" else [int(v) for v in raw.split("|")]
        grid[name] = values
    summary = sweep(base, grid)

    pieces = [emit_report(r, fmt) for r in summary.reports]
    if fmt == "text":
        lines = ["", "sweep summary:"]
        for alg, (lo, hi) in sorted(summary.ratio_range.items()):
            lines.append(f"  {alg}: min ratio {lo}, max ratio {hi}")
        best = summary.best_by_ratio()
        if best is not None:
            lines.append(f"  best worst-case ratio: {best}")
        for point, message in summary.failures:
            lines.append(f"  failed: {point}: {message}")
        pieces.append("\n".join(lines) + "\n")
    _write("".join(pieces), out)
    if summary.failures or any(not r.certificate_ok for r in summary.reports):
        sys.exit(1)


@main.command()
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
@out_option
@format_option
def verify(scenario: str, out: str | None, fmt: str) -> None:
    """Run a scenario with optimum computation and certificate checks forced on."""
    try:
        config = load_scenario(scenario)
    except ScenarioError as exc:
        raise click.ClickException(str(exc))
    config = ScenarioConfig(
        scenario_id=config.scenario_id,
        omega=config.omega,
        cells=config.cells,
        algorithm=config.algorithm,
        traffic=config.traffic,
        verify_certificate=True,
        compute_opt=True,
    )
    _finish(run_experiment(config), out, fmt)


if __name__ == "__main__":
    main()
