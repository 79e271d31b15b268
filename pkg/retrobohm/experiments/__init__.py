"""Provide one runner per experiment kind."""
from ..models.config import BaseExperimentConfig
from .base import Experiment, ExperimentResult, Table
from .ensemble import (
    AppendixCheckExperiment,
    BornCheckExperiment,
    EquivarianceExperiment,
)
from .fields import EvolveExperiment, FieldsExperiment
from .spin import EntangledValueExperiment, SpinMapExperiment, WeakValueExperiment
from .trajectories import TrajectoriesExperiment

EXPERIMENTS: dict[str, type[Experiment]] = {
    experiment.kind: experiment
    for experiment in (
        WeakValueExperiment,
        EntangledValueExperiment,
        SpinMapExperiment,
        EvolveExperiment,
        FieldsExperiment,
        TrajectoriesExperiment,
        BornCheckExperiment,
        AppendixCheckExperiment,
        EquivarianceExperiment,
    )
}


def run_experiment(config: BaseExperimentConfig, seed: int) -> ExperimentResult:
    """Run the experiment a config describes.

    :param config: The validated config.
    :param seed: The seed for the run.

    :returns: The result with its check outcomes.

    """
    return EXPERIMENTS[config.kind](config, seed).run()
