"""Models for writing experiment results to various outputs."""
from __future__ import annotations

import csv
import io
import json
from abc import ABC, abstractmethod
from collections.abc import Mapping
from pathlib import Path
from typing import TYPE_CHECKING, Any

import click

from ..const import RESOLVED_CONFIG_NAME
from ..utils import atomic_write_text, format_number, plural, to_jsonable

if TYPE_CHECKING:
    from ..experiments.base import ExperimentResult, Table

SUMMARY_NAME = "summary.json"
SNAPSHOT_DIRECTORY = "snapshots"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_number(value)
    return str(value)


def _dumps(value: Any) -> str:
    return json.dumps(to_jsonable(value), indent=2) + "\n"


def render_csv(table: Table) -> str:
    """Render a table as CSV text with a header row and LF line endings."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(table.header)
    for row in table.rows:
        writer.writerow([_cell(value) for value in row])
    return buffer.getvalue()


class BaseWriter(ABC):
    """Base class for writers."""

    @abstractmethod
    def write(self) -> list[Path]:
        """Write the result to the output.

        :returns: The files written, if any.

        """

    def __init__(self, result: ExperimentResult, resolved: Mapping[str, Any]):
        """Initialize a new BaseWriter instance.

        :param result: The experiment result.
        :param resolved: The fully resolved config the result was produced with.

        """
        self.result = result
        self.resolved = resolved


class ConsoleWriter(BaseWriter):
    """Writes the summary and check outcomes to the console."""

    def __init__(
        self,
        result: ExperimentResult,
        resolved: Mapping[str, Any],
        written: list[Path] | None = None,
    ):
        """Initialize a new ConsoleWriter instance.

        :param written: Files written by the other writers, listed at the end.

        """
        super().__init__(result, resolved)
        self.written = written or []

    def write(self) -> list[Path]:
        """Write the result to the console."""
        result = self.result
        title = f"{result.kind} (seed {result.seed})"
        click.secho(title, fg="blue")
        click.secho("-" * len(title), fg="green")
        for key, value in result.summary.items():
            if isinstance(value, list) and len(value) > 8:
                value = f"[{len(value)} values]"
            elif isinstance(value, float):
                value = f"{value:.12g}"
            click.echo(f"{click.style(key, fg='yellow'):<40} {to_jsonable(value)}")
        for outcome in result.checks:
            status = click.style(
                "PASS" if outcome.passed else "FAIL",
                fg="green" if outcome.passed else "red",
            )
            click.echo(f"  [{status}] {outcome.name}: {outcome.detail}")
        if self.written:
            click.echo(f"Wrote {plural(len(self.written)):file}:")
            for path in self.written:
                click.echo(f"    {path}")
        click.secho(
            "PASS" if result.passed else "FAIL",
            fg="green" if result.passed else "red",
            bold=True,
        )
        return []


class CsvWriter(BaseWriter):
    """Writes each result table to ``<name>.csv`` in the output directory."""

    def __init__(
        self, result: ExperimentResult, resolved: Mapping[str, Any], directory: Path
    ):
        """Initialize a new CsvWriter instance.

        :param directory: The output directory.

        """
        super().__init__(result, resolved)
        self.directory = directory

    def write(self) -> list[Path]:
        """Write the tables."""
        written = []
        for name, table in self.result.tables.items():
            path = self.directory / f"{name}.csv"
            atomic_write_text(path, render_csv(table))
            written.append(path)
        return written


class JsonWriter(BaseWriter):
    """Writes the summary, the resolved config and any snapshots as JSON.

    ``summary.json`` holds the kind, seed, pass flag, every summary value, the check
    outcomes and the config echo. ``resolved_config.json`` holds the config echo
    alone, ready to be fed back to ``retrobohm run``.

    """

    def __init__(
        self, result: ExperimentResult, resolved: Mapping[str, Any], directory: Path
    ):
        """Initialize a new JsonWriter instance.

        :param directory: The output directory.

        """
        super().__init__(result, resolved)
        self.directory = directory

    def document(self) -> dict[str, Any]:
        """Return the summary document."""
        result = self.result
        return {
            "kind": result.kind,
            "seed": result.seed,
            "pass": result.passed,
            **result.summary,
            "checks": [outcome.to_dict() for outcome in result.checks],
            "config_echo": dict(self.resolved),
        }

    def write(self) -> list[Path]:
        """Write the JSON files."""
        summary_path = self.directory / SUMMARY_NAME
        config_path = self.directory / RESOLVED_CONFIG_NAME
        atomic_write_text(summary_path, _dumps(self.document()))
        atomic_write_text(config_path, _dumps(self.resolved))
        written = [summary_path, config_path]
        for name, snapshot in self.result.snapshots.items():
            path = self.directory / SNAPSHOT_DIRECTORY / f"{name}.json"
            atomic_write_text(path, _dumps(snapshot))
            written.append(path)
        return written
