"""Provide the CLI."""
import logging
import sys
from collections.abc import Callable
from pathlib import Path
from typing import Any

import click
import numpy as np

from . import __version__, set_normal, set_quiet, set_verbose
from .const import DEFAULT_OUTPUT_ROOT, EXIT_CONFIG_INVALID, EXIT_FAILED
from .exceptions import ConfigInvalid, ExperimentFailed, RetroBohmError
from .experiments import run_experiment
from .models import (
    CONFIG_MODELS,
    BaseExperimentConfig,
    ConsoleWriter,
    CsvWriter,
    InvokeContext,
    JsonWriter,
    load_config,
    parse_config,
    resolved_config,
)

log = logging.getLogger(__name__)

KIND_HELP = {
    "spin-map": "Reconstruct the spin vector between two measurements over the sphere.",
    "evolve": "Evolve a Gaussian packet and write its density and current.",
    "fields": "Write the causally symmetric density and current of two boundary states.",
    "trajectories": "Integrate causally symmetric worldlines and record reversals.",
    "born-check": "Recover Born probabilities from trajectory end points.",
    "appendix-check": "Average the two-boundary current over a complete final basis.",
    "equivariance": "Check that a transported ensemble keeps following |psi|^2.",
}


def _direction(_: click.Context, __: click.Parameter, value: Any) -> Any:
    """Turn ``x``/``-z`` style names or ``1,0,1`` into a direction config value."""
    if value is None:
        return None
    if isinstance(value, tuple):
        return [_direction(_, __, item) for item in value] or None
    if "," not in value:
        return value
    try:
        return [float(part) for part in value.split(",")]
    except ValueError:
        msg = f"{value!r} is neither an axis name nor comma separated numbers"
        raise click.BadParameter(msg) from None


config_option = click.option(
    "config_path",
    "--config",
    "-c",
    default=None,
    help="The TOML or JSON config file.",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)


def _draw_seed() -> int:
    return int(np.random.SeedSequence().generate_state(1, dtype=np.uint64)[0])


def _kind_config(
    kind: str, config_path: Path | None, params: dict[str, Any]
) -> BaseExperimentConfig:
    """Load a config for one kind and apply parameter overrides from flags."""
    config = (
        load_config(config_path)
        if config_path is not None
        else CONFIG_MODELS[kind]()
    )
    if config.kind != kind:
        msg = f"{config_path} describes a {config.kind} experiment, not {kind}"
        raise ConfigInvalid(msg)
    overrides = {key: value for key, value in params.items() if value is not None}
    if not overrides:
        return config
    data = resolved_config(config)
    data["params"].update(overrides)
    return parse_config(data, source=f"{kind} options")


def dispatch(context: InvokeContext, loader: Callable[[], BaseExperimentConfig]):
    """Load a config, run it and exit with the matching status.

    :param context: The top-level options.
    :param loader: Returns the validated config.

    """
    try:
        execute(context, loader())
    except ConfigInvalid as error:
        log.error(str(error))
        sys.exit(EXIT_CONFIG_INVALID)
    except ExperimentFailed as error:
        log.error(str(error))
        sys.exit(EXIT_FAILED)
    except RetroBohmError:
        # Already logged with the experiment's prefix.
        sys.exit(EXIT_FAILED)


def execute(context: InvokeContext, config: BaseExperimentConfig):
    """Run an experiment and write its outputs.

    The seed and output directory are resolved before the run and recorded in the
    config echo, so re-running the echo reproduces the outputs exactly.

    :param context: The top-level options.
    :param config: The validated config.

    """
    updates: dict[str, Any] = {}
    if context.seed is not None:
        updates["seed"] = context.seed
    elif config.seed is None:
        updates["seed"] = _draw_seed()
    if context.out is not None:
        updates["output"] = context.out
    elif config.output is None:
        updates["output"] = DEFAULT_OUTPUT_ROOT / config.kind
    config = config.model_copy(update=updates)
    resolved = resolved_config(config)

    result = run_experiment(config, config.seed)
    written = JsonWriter(result, resolved, config.output).write()
    written += CsvWriter(result, resolved, config.output).write()
    if not context.quiet:
        ConsoleWriter(result, resolved, written).write()
    if not result.passed:
        names = ", ".join(outcome.name for outcome in result.failed_checks)
        msg = f"{config.kind} failed: {names}"
        raise ExperimentFailed(msg)


@click.group()
@click.pass_context
@click.option(
    "--seed",
    "-s",
    default=None,
    help="The random seed, overriding the config's.",
    type=click.IntRange(0, 2**64 - 1),
)
@click.option(
    "--out",
    "-o",
    default=None,
    help=f"The output directory. Defaults to the config's, then {DEFAULT_OUTPUT_ROOT}/<kind>.",
    type=click.Path(file_okay=False, path_type=Path),
)
@click.option(
    "--quiet",
    "-q",
    default=False,
    help="Only log warnings and skip the console summary.",
    is_flag=True,
)
@click.option(
    "--verbose", "-v", default=False, help="Enable verbose logging.", is_flag=True
)
@click.version_option(__version__, prog_name="retrobohm")
def main(
    context: click.Context,
    seed: int | None,
    out: Path | None,
    quiet: bool,
    verbose: bool,
):
    """RetroBohm runs two-boundary spin, field and trajectory experiments.

    Every experiment is described by a config file; the fully resolved config is written
    next to the results.

    """
    context.obj = InvokeContext(out, seed, quiet, verbose)
    if verbose:
        set_verbose()
    elif quiet:
        set_quiet()
    else:
        set_normal()


@main.command()
@click.pass_obj
@click.option(
    "config_path",
    "--config",
    "-c",
    help="The TOML or JSON config file.",
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
def run(context: InvokeContext, config_path: Path):
    """Run the experiment named by the config's kind."""
    dispatch(context, lambda: load_config(config_path))


@main.command("weak-value")
@click.pass_obj
@config_option
@click.option(
    "--pre",
    callback=_direction,
    default=None,
    help="The preparation axis, e.g. z or 1,0,1.",
)
@click.option(
    "--post",
    callback=_direction,
    default=None,
    help="The later outcome's axis.",
)
@click.option(
    "components",
    "--h",
    callback=_direction,
    help="A component to evaluate. Can be provided multiple times.",
    multiple=True,
)
def weak_value(
    context: InvokeContext,
    config_path: Path | None,
    pre: Any,
    post: Any,
    components: list[Any] | None,
):
    """Evaluate spin components between a preparation and a later outcome."""
    dispatch(
        context,
        lambda: _kind_config(
            "weak-value",
            config_path,
            {
                "pre": None if pre is None else {"axis": pre},
                "post": None if post is None else {"axis": post},
                "components": components,
            },
        ),
    )


@main.command("entangled-value")
@click.pass_obj
@config_option
@click.option("--axis1", callback=_direction, default=None, help="Particle 1's axis.")
@click.option("--axis2", callback=_direction, default=None, help="Particle 2's axis.")
@click.option(
    "--outcome1", default=None, help="Particle 1's outcome.", type=click.Choice(["+", "-"])
)
@click.option(
    "--outcome2", default=None, help="Particle 2's outcome.", type=click.Choice(["+", "-"])
)
@click.option(
    "components",
    "--h",
    callback=_direction,
    help="A component of particle 2 to evaluate. Can be provided multiple times.",
    multiple=True,
)
def entangled_value(
    context: InvokeContext,
    config_path: Path | None,
    axis1: Any,
    axis2: Any,
    outcome1: str | None,
    outcome2: str | None,
    components: list[Any] | None,
):
    """Evaluate particle 2's spin components given both outcomes of a pair."""
    dispatch(
        context,
        lambda: _kind_config(
            "entangled-value",
            config_path,
            {
                "axis1": axis1,
                "axis2": axis2,
                "outcome1": outcome1,
                "outcome2": outcome2,
                "components": components,
            },
        ),
    )


def _kind_command(kind: str, help_text: str) -> click.Command:
    @main.command(kind, help=help_text)
    @click.pass_obj
    @config_option
    def command(context: InvokeContext, config_path: Path | None):
        dispatch(context, lambda: _kind_config(kind, config_path, {}))

    return command


for _kind, _help in KIND_HELP.items():
    _kind_command(_kind, _help)
