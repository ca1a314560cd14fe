"""Command-line front end: run suites, summarize runs, replay rows, constants.

Exit codes: 0 on success, 1 on usage or I/O errors, 2 when a summary verdict
or a replay comparison fails.
"""

from __future__ import annotations

import json
import os

import click

from .. import asymptotics
from .config import ExperimentConfig
from .report import emit_plots, load_records, summarize
from .runner import replay_record, run_experiment
from .suites import SUITES


class VerdictFailure(Exception):
    """A verdict-bearing check failed; mapped to exit code 2."""


@click.group(name="eur-lab")
def cli():
    """Numerical laboratory for entropy bounds of random measurements."""


def _parse_dims(text: str) -> tuple:
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise click.UsageError(f"--dims expects comma-separated integers, got {text!r}")


@cli.command(name="run")
@click.option("--experiment", required=True, type=click.Choice(list(SUITES)))
@click.option("--dims", default="", help="Comma-separated dimensions, e.g. 4,8,16; empty uses the suite default.")
@click.option("--trials", default=0, type=int, help="Trials per dimension; 0 uses the suite default.")
@click.option("--seed", default=42, type=int, help="Root seed for all trial streams.")
@click.option("--L", "ell", default=2, type=int, help="Number of measurements for multi-measurement suites.")
@click.option("--enum-budget", default=2_000_000, type=int, help="Max index pairs an exact search may enumerate.")
@click.option("--allow-heuristic", is_flag=True, help="Permit heuristic (lower-bound) profiles at large N.")
@click.option("--workers", default=0, type=int, help="Worker processes; 0 picks the CPU count.")
@click.option("--out", envvar="EUR_LAB_OUT", required=True, type=click.Path(file_okay=False))
def run_cmd(experiment, dims, trials, seed, ell, enum_budget, allow_heuristic, workers, out):
    """Run one suite over a dimension grid and write records incrementally."""
    cfg = ExperimentConfig(
        experiment=experiment,
        dims=_parse_dims(dims),
        L=ell,
        trials=trials,
        seed=seed,
        enum_budget=enum_budget,
        restarts=0,
        output_dir=out,
        workers=workers,
        allow_heuristic=allow_heuristic,
    )
    records = run_experiment(cfg)
    click.echo(f"{experiment}: {len(records)} records -> {os.path.join(out, 'records.csv')}")


@cli.command(name="summarize")
@click.argument("directory", required=False, type=click.Path(exists=True, file_okay=False))
def summarize_cmd(directory):
    """Summarize a run directory; write summary.json and render the plots."""
    if directory is None:
        directory = os.environ.get("EUR_LAB_OUT", "")
    if not directory:
        raise click.UsageError("give a run directory or set EUR_LAB_OUT")
    records = load_records(directory)
    summary = summarize(records)
    out_path = os.path.join(directory, "summary.json")
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    emit_plots(records, directory)
    asserted = [g for g in summary["groups"] if g["verdict"] is not None]
    for g in asserted:
        word = "pass" if g["verdict"] else "FAIL"
        click.echo(
            f"[{word}] {g['experiment']} N={g['N']} L={g['L']} {g['statistic']}: "
            f"mean={g['mean']:.6g} theory={g['theory']}"
        )
    for chk in summary["checks"]:
        word = "pass" if chk["passed"] else "FAIL"
        click.echo(f"[{word}] {chk['experiment']} {chk['name']}: {chk['detail']}")
    click.echo(
        f"{len(summary['groups'])} groups, {len(asserted)} asserted, "
        f"{len(summary['checks'])} cross checks -> {out_path}"
    )
    if not summary["ok"]:
        raise VerdictFailure("summary verdicts failed")
    click.echo("summary: ok")


@cli.command(name="replay")
@click.option("--record", "row_id", required=True, type=int, help="1-based data row number in records.csv.")
@click.option("--out", envvar="EUR_LAB_OUT", required=True, type=click.Path(exists=True, file_okay=False))
def replay_cmd(row_id, out):
    """Recompute one stored record from its seed path and compare values."""
    result = replay_record(out, row_id)
    click.echo(
        f"row {result['row']}: {result['experiment']} N={result['N']} "
        f"L={result['L']} trial={result['trial']} {result['statistic']} "
        f"seed_path={result['seed_path']}"
    )
    click.echo(f"stored   {result['stored_value']!r}")
    click.echo(f"replayed {result['replayed_value']!r}")
    if not result["match"]:
        raise VerdictFailure("replayed value differs from the stored record")
    click.echo("replay: match")


@cli.command(name="constants")
def constants_cmd():
    """Print every named constant with its value and role."""
    table = asymptotics.constants_table()
    width = max(len(row["name"]) for row in table)
    for row in table:
        click.echo(f"{row['name']:<{width}}  {row['value']!r:<22}  {row['description']}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        click.echo("aborted", err=True)
        return 1
    except VerdictFailure as exc:
        click.echo(f"failed: {exc}", err=True)
        return 2
    except (OSError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
