"""Command-line entry point: staged scenario execution and result serving."""

from __future__ import annotations

import functools
import http.server
import json
import os
from pathlib import Path

import click

from .heatsys.io import load_scenario
from .pipeline import ScenarioRunner, apply_preset

JOBS_ENV = "HEATPLAN_JOBS"


def _runner(scenario: str, jobs: int | None) -> ScenarioRunner:
    config = load_scenario(scenario)
    env_jobs = os.environ.get(JOBS_ENV)
    if jobs is not None:
        config.jobs = jobs
    elif env_jobs:
        config.jobs = int(env_jobs)
    return ScenarioRunner(config)


def scenario_options(f):
    @click.argument("scenario", type=click.Path(exists=True, dir_okay=False))
    @click.option("--jobs", "-j", type=int, default=None,
                  help=f"worker count (overrides {JOBS_ENV} and the scenario file)")
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        return f(*args, **kwargs)

    return wrapper


@click.group()
def main():
    """District-heating design space generation with grid impact assessment."""


@main.command()
@scenario_options
def solve(scenario, jobs):
    """Least-cost capacity expansion only."""
    runner = _runner(scenario, jobs)
    design = runner.stage_least_cost()
    click.echo(f"objective: {design.objective:.2f} EUR/a")
    for aid, cap in sorted(design.capacities.items()):
        if cap > 1e-6:
            click.echo(f"  {aid}: {cap:.3f} MW")


@main.command()
@scenario_options
def spores(scenario, jobs):
    """Near-optimal alternative designs under the cost budget."""
    runner = _runner(scenario, jobs)
    spore_set = runner.stage_spores()
    click.echo(f"{len(spore_set.spores)} spores within {100 * spore_set.slack:.0f}% of "
               f"C* = {spore_set.c_star:.2f}")


@main.command()
@scenario_options
def flows(scenario, jobs):
    """Time-series power flows for baseline, least-cost, and every spore."""
    runner = _runner(scenario, jobs)
    results = runner.stage_flows()
    diverged = sum(f.divergence_count for f in results.values())
    click.echo(f"{len(results)} flow runs, {diverged} diverged snapshots total")


@main.command()
@scenario_options
def metrics(scenario, jobs):
    """Assemble the decision space (runs upstream stages as needed)."""
    runner = _runner(scenario, jobs)
    space = runner.stage_metrics()
    click.echo(f"{len(space.rows)} rows -> {runner.out / 'decision_space.csv'}")


@main.command()
@scenario_options
def run(scenario, jobs):
    """Full campaign: solve, spores, flows, metrics."""
    runner = _runner(scenario, jobs)
    space = runner.stage_metrics()
    click.echo(f"done: {len(space.rows)} rows in {runner.out}")


@main.command("filter")
@click.argument("outdir", type=click.Path(exists=True, file_okay=False))
@click.option("--preset", required=True, help="named constraint preset from the exported bundle")
def filter_cmd(outdir, preset):
    """Spore ids surviving a shipped constraint preset."""
    bundle = Path(outdir) / "decision_space.json"
    if not bundle.exists():
        raise click.ClickException(f"{bundle} not found; run `plan metrics <scenario>` first")
    kept = apply_preset(bundle, preset)
    click.echo(f"{len(kept)} spores pass preset {preset!r}:")
    for sid in kept:
        click.echo(f"  {sid}")


@main.command()
@click.argument("outdir", type=click.Path(file_okay=False))
@click.option("--port", type=int, default=8321, show_default=True)
def serve(outdir, port):
    """Serve the output directory (decision_space.json etc.) over HTTP."""
    out = Path(outdir)
    if not (out / "decision_space.json").exists():
        raise click.ClickException(f"no results in {out}; run `plan run <scenario>` first")

    handler = functools.partial(http.server.SimpleHTTPRequestHandler, directory=str(out))
    click.echo(f"serving {out} at http://127.0.0.1:{port}/decision_space.json")
    with http.server.ThreadingHTTPServer(("127.0.0.1", port), handler) as httpd:
        httpd.serve_forever()


if __name__ == "__main__":
    main()
