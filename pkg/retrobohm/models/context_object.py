"""Provide the InvokeContext class."""
from dataclasses import dataclass
from pathlib import Path


@dataclass
class InvokeContext:
    """Represents the options given to the top-level command.

    :ivar out Path | None: The output directory, overriding the config's ``output``.
    :ivar seed int | None: The seed, overriding the config's ``seed``.
    :ivar quiet bool: Whether to skip the console summary and log warnings only.
    :ivar verbose bool: Whether debug logging is enabled.

    """

    out: Path | None
    seed: int | None
    quiet: bool
    verbose: bool
