"""Provide pass/fail criteria for experiment results."""
import math
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass
from typing import Any, Generic, TypeVar

T = TypeVar("T")

Summary = Mapping[str, Any]


@dataclass(frozen=True)
class CheckOutcome:
    """The result of running one check.

    :ivar name str: The check's name.
    :ivar passed bool: Whether the criterion was met.
    :ivar detail str: The compared quantities.

    """

    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict[str, Any]:
        """Return the outcome as plain JSON types."""
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


class Check(Generic[T]):
    """A check function.

    This is a generic class wrapping a function that takes an item and returns whether
    it passed along with a message describing the comparison.

    """

    def __call__(self, item: T) -> tuple[bool, str]:
        """Call the check function.

        :param item: The item to check.

        :returns: A tuple containing a boolean indicating whether the item passed the
            check, and a message describing the comparison.

        """
        return self.func(item)

    def __init__(self, func: Callable[[T], tuple[bool, str]], name: str) -> None:
        """Initialize a new check function.

        :param func: The function to use for the check.
        :param name: The name reported alongside the result.

        """
        self.func = func
        self.name = name

    def __repr__(self) -> str:
        """Return a string representation of the check function."""
        return f"Check({self.name})"

    def evaluate(self, item: T) -> CheckOutcome:
        """Run the check and wrap the result."""
        passed, detail = self(item)
        return CheckOutcome(self.name, bool(passed), detail)


def check_at_most(name: str, key: str, bound: float) -> Check[Summary]:
    """Check that a summary value does not exceed a bound.

    :param name: The name of the check.
    :param key: The summary key holding the value.
    :param bound: The largest allowed value.

    :returns: The check.

    """

    def check(item: Summary) -> tuple[bool, str]:
        value = float(item[key])
        result = math.isfinite(value) and value <= bound
        return result, f"{key} = {value:.6g} {'<=' if result else '>'} {bound:.6g}"

    return Check(check, name)


def check_below(name: str, key: str, bound: float) -> Check[Summary]:
    """Check that a summary value is strictly below a bound."""

    def check(item: Summary) -> tuple[bool, str]:
        value = float(item[key])
        result = math.isfinite(value) and value < bound
        return result, f"{key} = {value:.6g} {'<' if result else '>='} {bound:.6g}"

    return Check(check, name)


def check_close(name: str, key: str, expected_key: str, tolerance: float) -> Check[Summary]:
    """Check that two summary values agree within an absolute tolerance.

    :param name: The name of the check.
    :param key: The summary key holding the observed value.
    :param expected_key: The summary key holding the expected value.
    :param tolerance: The largest allowed absolute difference.

    :returns: The check.

    """

    def check(item: Summary) -> tuple[bool, str]:
        value = float(item[key])
        expected = float(item[expected_key])
        difference = abs(value - expected)
        result = difference <= tolerance
        return (
            result,
            f"|{key} - {expected_key}| = {difference:.3e}"
            f" {'<=' if result else '>'} {tolerance:.1e}",
        )

    return Check(check, name)


def check_flag(name: str, key: str, expected: bool = True) -> Check[Summary]:
    """Check that a boolean summary value has the expected state."""

    def check(item: Summary) -> tuple[bool, str]:
        value = bool(item[key])
        return value is expected, f"{key} = {value}"

    return Check(check, name)


def run_checks(checks: Iterable[Check[T]], item: T) -> list[CheckOutcome]:
    """Run every check against an item, in order."""
    return [check.evaluate(item) for check in checks]
