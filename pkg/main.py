#!/usr/bin/env python3
import sys
import logging
import functools
from pathlib import Path

import click

from config import config
from input_handlers import ScenarioValidator
from reports import ReportFormatter
from runner import ScenarioRunner
from scenarios.config import scenario_config
from utils import get_file_extension_from_format, setup_logging, validate_output_format
from utils.errors import QGLError, ScenarioValidationError

EXIT_VALIDATION = 2
EXIT_COMPUTATION = 3

logger = logging.getLogger(__name__)


def scenario_options(func):
    """Options shared by every computing subcommand"""
    @click.option('--scenario', '-s', required=True, help='Scenario file (JSON/YAML) or bundled scenario name')
    @click.option('--out', '-o', type=click.Path(file_okay=False), help='Directory for report and CSV files')
    @click.option('--seed', type=click.IntRange(0, 2 ** 64 - 1), help='Monte Carlo seed (overrides the scenario)')
    @click.option('--sweep', help='Parameter sweep param:lo:hi:steps')
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        return func(*args, **kwargs)
    return wrapper


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Enable verbose logging')
@click.option('--format', '-f', 'output_format', default='json', help='Report format: json, markdown, text')
@click.pass_context
def main(ctx, verbose, output_format):
    """Quantum geometric limit toolkit"""
    setup_logging("DEBUG" if verbose else config.log_level, config.log_file)
    if not validate_output_format(output_format):
        raise click.BadParameter(f"'{output_format}' (valid formats: text, markdown, json)",
                                 param_hint="--format")
    ctx.obj = {"verbose": verbose, "format": output_format.lower()}


def run_subcommand(ctx, subcommand, scenario, out, seed, sweep):
    """Validate, run, write; exit 2 on validation errors and 3 on computation errors"""
    options = ctx.obj
    validator = ScenarioValidator()
    formatter = ReportFormatter()
    try:
        validation_result = validator.validate_input(scenario)
        if not validation_result['is_valid']:
            raise ScenarioValidationError(validation_result['error'], path=scenario)
        path = Path(validation_result['path'])
        loaded = scenario_config.load(path)

        seed = seed if seed is not None else loaded.seed
        check = validator.validate_scenario(loaded, subcommand, seed)
        if not check['is_valid']:
            raise ScenarioValidationError(check['error'], path=str(path))

        sweep_spec = None
        if sweep:
            check = validator.validate_sweep(sweep, subcommand)
        elif loaded.sweep is not None:
            check = validator.validate_sweep_spec(loaded.sweep, subcommand)
        if sweep or loaded.sweep is not None:
            if not check['is_valid']:
                raise ScenarioValidationError(check['error'], path=str(path))
            sweep_spec = check['sweep']

        runner = ScenarioRunner(loaded, seed=seed, base_dir=path.parent, show_progress=options["verbose"])
        logger.info(f"Running {subcommand} on scenario '{loaded.name}'")
        rows = None
        if sweep_spec:
            rows, diagnostics = runner.sweep(subcommand, sweep_spec)
            payload = {"scenario": loaded.echo(), "subcommand": subcommand, "seed": seed,
                       "constants": runner.constants.echo(), "sweep": diagnostics, "rows": rows}
        else:
            payload = runner.run(subcommand)
    except ScenarioValidationError as e:
        click.echo(f"Error: {e}", err=True)
        ctx.exit(EXIT_VALIDATION)
    except QGLError as e:
        click.echo(f"Error: {e.describe()}", err=True)
        ctx.exit(EXIT_COMPUTATION)
    except ValueError as e:
        logger.debug("Computation failed", exc_info=True)
        click.echo(f"Error: [{subcommand}] {e}", err=True)
        ctx.exit(EXIT_COMPUTATION)

    report = formatter.envelope(payload)
    out_dir = out or loaded.output.directory
    if out_dir:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        report_path = out_dir / Path(loaded.output.report).with_suffix(
            get_file_extension_from_format(options["format"]))
        formatter.save_report(report, report_path, options["format"])
        click.echo(f"Report saved to {report_path}")
        if rows:
            csv_path = out_dir / loaded.output.csv
            formatter.write_csv(rows, csv_path)
            click.echo(f"Sweep table saved to {csv_path}")
    else:
        formatter.print_report(report, options["format"])


@main.command()
@scenario_options
@click.pass_context
def bounds(ctx, scenario, out, seed, sweep):
    """Event-count bounds and the curvature limit for a covariant solid"""
    run_subcommand(ctx, "bounds", scenario, out, seed, sweep)


@main.command()
@scenario_options
@click.pass_context
def region(ctx, scenario, out, seed, sweep):
    """Four-volume, world-sheet area and horizon check of a covariant solid"""
    run_subcommand(ctx, "region", scenario, out, seed, sweep)


@main.command()
@scenario_options
@click.pass_context
def clock(ctx, scenario, out, seed, sweep):
    """Orthogonality times and tick bounds of quantum clocks"""
    run_subcommand(ctx, "clock", scenario, out, seed, sweep)


@main.command()
@scenario_options
@click.pass_context
def regge(ctx, scenario, out, seed, sweep):
    """Deficit angles and curvature sums of simplicial complexes"""
    run_subcommand(ctx, "regge", scenario, out, seed, sweep)


@main.command()
@scenario_options
@click.pass_context
def cosmo(ctx, scenario, out, seed, sweep):
    """Event counts and resolution of the universe to date"""
    run_subcommand(ctx, "cosmo", scenario, out, seed, sweep)


@main.command(name="scenarios")
def list_scenarios():
    """List bundled scenarios and exit"""
    click.echo("Bundled scenarios:")
    for name in scenario_config.list_scenarios():
        click.echo(f"  - {name}")


if __name__ == '__main__':
    sys.exit(main())
