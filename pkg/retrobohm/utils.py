"""Provide utility functions for RetroBohm."""
import math
import os
import tempfile
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Any

import numpy as np


def atomic_write_text(path: Path, text: str):
    """Write text to a file atomically.

    The text goes to a temporary file in the destination directory which is then
    renamed over the destination, so readers never observe a partial file.

    :param path: The destination path.
    :param text: The text to write.

    """
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(
        dir=path.parent, prefix=f".{path.name}.", suffix=".tmp"
    )
    temp_path = Path(temp_name)
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as temp_file:
            temp_file.write(text)
        temp_path.replace(path)
    except BaseException:
        temp_path.unlink(missing_ok=True)
        raise


def format_number(value: float) -> str:
    """Format a real number with 17 significant digits.

    :param value: The value to format.

    :returns: A string that parses back to the identical float.

    """
    return f"{float(value):.17g}"


class plural:  # noqa: N801
    """A class to format a number with a singular or plural form."""

    def __format__(self, format_spec: str) -> str:
        """Format the number with a singular or plural form.

        :param format_spec: The format specifier.

        :returns: The formatted number.

        """
        v = self.value
        singular_form, _, plural_form = format_spec.partition("|")
        plural_form = plural_form or f"{singular_form}s"
        if abs(v) != 1:
            return f"{v} {plural_form}"
        return f"{v} {singular_form}"

    def __init__(self, value: int):
        """Initialize the class with a number.

        :param value: The number to format.

        """
        self.value: int = value


def to_jsonable(value: Any) -> Any:
    """Convert results into plain JSON types.

    Complex numbers become ``{"re": ..., "im": ...}``, numpy scalars and arrays become
    Python floats and lists. Non-finite floats are written as strings so the output
    stays valid JSON.

    :param value: The value to convert.

    :returns: The converted value.

    """
    if isinstance(value, Mapping):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, np.ndarray):
        return [to_jsonable(item) for item in value.tolist()]
    if isinstance(value, complex | np.complexfloating):
        return {"re": to_jsonable(value.real), "im": to_jsonable(value.imag)}
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, Path):
        return value.as_posix()
    if isinstance(value, Sequence) and not isinstance(value, str):
        return [to_jsonable(item) for item in value]
    return value
