"""Provide the Experiment base class and the result containers."""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from typing import Any, ClassVar, Generic, TypeVar

from ..checks import Check, CheckOutcome, Summary, run_checks
from ..exceptions import RetroBohmError
from ..logger import PrefixLogger
from ..models.config import BaseExperimentConfig

log = logging.getLogger(__name__)

C = TypeVar("C", bound=BaseExperimentConfig)


@dataclass(frozen=True)
class Table:
    """Rows destined for a CSV file.

    :ivar header tuple[str, ...]: The column names.
    :ivar rows list[Sequence[Any]]: The rows, each as long as the header.

    """

    header: tuple[str, ...]
    rows: list[Sequence[Any]] = field(default_factory=list)


@dataclass(frozen=True)
class ExperimentResult:
    """Everything one experiment run produces.

    :ivar kind str: The experiment kind.
    :ivar seed int: The seed the run used.
    :ivar summary dict[str, Any]: Named results, written to ``summary.json``.
    :ivar tables dict[str, Table]: CSV tables by file stem.
    :ivar snapshots dict[str, dict]: Wavefunction snapshots by file stem.
    :ivar checks list[CheckOutcome]: The pass/fail criteria, in order.

    """

    kind: str
    seed: int
    summary: dict[str, Any]
    tables: dict[str, Table] = field(default_factory=dict)
    snapshots: dict[str, dict] = field(default_factory=dict)
    checks: list[CheckOutcome] = field(default_factory=list)

    @property
    def failed_checks(self) -> list[CheckOutcome]:
        """Return the checks that did not pass."""
        return [outcome for outcome in self.checks if not outcome.passed]

    @property
    def passed(self) -> bool:
        """Return whether every check passed."""
        return not self.failed_checks


class Experiment(ABC, Generic[C]):
    """Class for running one experiment kind from its config.

    Subclasses compute a result and declare the checks its summary must satisfy.

    """

    kind: ClassVar[str]

    @staticmethod
    def _log_prefix(experiment: Experiment) -> str:
        """Generate a log prefix for an experiment.

        :param experiment: The experiment to generate the prefix for.

        :returns: The generated prefix as a string.

        """
        return f"{experiment.kind} | seed {experiment.seed}"

    def __init__(self, config: C, seed: int):
        """Initialize a new Experiment.

        :param config: The validated config.
        :param seed: The seed for every random draw of the run.

        """
        self.config = config
        self.log: PrefixLogger[Experiment] = PrefixLogger(log, self._log_prefix)
        self.params = config.params
        self.seed = seed
        self.tolerances = config.tolerances

    @abstractmethod
    def checks(self) -> list[Check[Summary]]:
        """Return the criteria the summary must meet."""

    @abstractmethod
    def compute(self) -> ExperimentResult:
        """Run the numerics and return a result without check outcomes."""

    def run(self) -> ExperimentResult:
        """Compute the result and evaluate its checks.

        :returns: The result with check outcomes attached.

        """
        self.log.info("Starting", self)
        try:
            result = self.compute()
        except RetroBohmError as error:
            self.log.error(f"Aborted by {type(error).__name__}: {error}", self)
            raise
        outcomes = run_checks(self.checks(), result.summary)
        for outcome in outcomes:
            if outcome.passed:
                self.log.debug(f"{outcome.name}: {outcome.detail}", self)
            else:
                self.log.warning(f"Failed {outcome.name}: {outcome.detail}", self)
        result = replace(result, checks=outcomes)
        self.log.info("Passed" if result.passed else "Failed", self)
        return result
